//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches one subcommand and returns the exit
//! code: 0 success, 1 usage or parse or I/O error, 2 unsupported case or
//! out-of-range target, 3 verification failure.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::degseq::{is_realizable, minimal_correction, realize};
use crate::error::{Error, Result};
use crate::moore::{moore_m, moore_move_to_one, moore_move_to_zero, MooreDigits};
use crate::oracle::{build_table_with_budget, longest_play_with, successors, SgTable, DEFAULT_BUDGET};
use crate::position::{apply_move, is_legal_move, normalize, GameSpec, Move, Pile, Position, Ruleset};
use crate::sg_exact::{
    formula_supported, is_one_position, is_p_position, sg_params, sg_value, winning_move, PositionType,
};
use crate::tetris::{move_to_tetris, tetris_certificate, tetris_fast, tetris_value};
use crate::util::{all_multisets, all_tuples};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Exit code for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionMismatch { .. }
        | Error::InvalidSpec(_)
        | Error::IllegalMove(_)
        | Error::Io(_)
        | Error::Parse(_) => EXIT_USAGE,
        Error::UnsupportedCase(_)
        | Error::TargetOutOfRange { .. }
        | Error::RangeViolation { .. }
        | Error::PrePosition(_)
        | Error::BudgetExceeded(_)
        | Error::NotRealizable
        | Error::Overflow(_) => EXIT_UNSUPPORTED,
        Error::ConstructionFailed(_) => EXIT_MISMATCH,
    }
}

/// What `--json` prints. Keys inside `inputs` and `result` are sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
}

#[derive(Parser, Debug)]
#[command(name = "exact-nim", version, about = "Exact k-Nim and Moore's Nim solver")]
struct Cli {
    /// Print one JSON object on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SG value (exact) or M value (moore) of a position.
    Sg(SgArgs),
    /// Tetris value and shifted position.
    Tetris(TetrisArgs),
    /// A move reaching a requested SG, Tetris or M value.
    Move(MoveArgs),
    /// Exhaustive formula-versus-oracle check on all small positions.
    Verify(VerifyArgs),
    /// Write the SG table of all canonical positions up to a pile bound.
    Table(TableArgs),
    /// Play against the engine on the terminal.
    Play(PlayArgs),
    /// Degree sequences of k-uniform hypergraphs.
    Degseq(DegseqArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RulesetArg {
    Exact,
    Moore,
}

impl From<RulesetArg> for Ruleset {
    fn from(r: RulesetArg) -> Self {
        match r {
            RulesetArg::Exact => Ruleset::ExactK,
            RulesetArg::Moore => Ruleset::MooreAtMostK,
        }
    }
}

fn parse_pos(s: &str) -> std::result::Result<Position, String> {
    s.parse::<Position>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct SgArgs {
    #[arg(long, value_enum, default_value = "exact")]
    ruleset: RulesetArg,
    #[arg(long)]
    k: usize,
    /// Comma separated piles.
    #[arg(long, value_parser = parse_pos)]
    pos: Position,
}

#[derive(Args, Debug)]
struct TetrisArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_pos)]
    pos: Position,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["target_sg", "target_tetris", "target_m"])))]
struct MoveArgs {
    #[arg(long, value_enum, default_value = "exact")]
    ruleset: RulesetArg,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_pos)]
    pos: Position,
    #[arg(long)]
    target_sg: Option<u64>,
    #[arg(long)]
    target_tetris: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=1))]
    target_m: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Sg,
    Moves,
    Moore01,
    Corollary3,
    Tetris,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "exact")]
    ruleset: RulesetArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Largest pile size.
    #[arg(long)]
    max: Pile,
    #[arg(long, value_enum, default_value = "sg")]
    check: Check,
    /// Cap on enumerated and memoized positions.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_enum, default_value = "exact")]
    ruleset: RulesetArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    max: Pile,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Args, Debug)]
struct PlayArgs {
    #[arg(long, value_enum, default_value = "exact")]
    ruleset: RulesetArg,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_pos)]
    pos: Position,
    /// Let the engine make the first move.
    #[arg(long)]
    engine_first: bool,
}

#[derive(Args, Debug)]
struct DegseqArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = parse_pos)]
    pos: Position,
    /// Print an edge list realizing the sequence.
    #[arg(long)]
    realize: bool,
    /// Print the largest realizable sequence below the input.
    #[arg(long)]
    correct: bool,
}

struct Outcome {
    record: OutputRecord,
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(command: &str, inputs: Value, result: Value, text: String) -> Self {
        Outcome {
            record: OutputRecord {
                command: command.into(),
                inputs,
                result,
            },
            text,
            code: EXIT_OK,
        }
    }
}

/// Runs the CLI on `args` (program name first).
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Sg(a) => cmd_sg(a),
        Command::Tetris(a) => cmd_tetris(a),
        Command::Move(a) => cmd_move(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Table(a) => cmd_table(a),
        Command::Degseq(a) => cmd_degseq(a),
        Command::Play(a) => {
            return match cmd_play(a, input, out, err) {
                Ok(()) => EXIT_OK,
                Err(e) => report(err, &e),
            };
        }
    };
    match outcome {
        Ok(o) => {
            let written = if cli.json {
                serde_json::to_string(&o.record)
                    .map_err(|e| Error::Io(e.to_string()))
                    .and_then(|s| writeln!(out, "{s}").map_err(Error::from))
            } else {
                write!(out, "{}", o.text).map_err(Error::from)
            };
            match written {
                Ok(()) => o.code,
                Err(e) => report(err, &e),
            }
        }
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

fn big(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(v) => json!(v),
        Err(_) => json!(v.to_string()),
    }
}

fn m_json(md: &MooreDigits) -> Value {
    match md.to_u64() {
        Some(v) => json!(v),
        None => json!(md.mvalue.to_string()),
    }
}

fn move_json(mv: &Move) -> Value {
    Value::Array(
        mv.changes()
            .iter()
            .map(|(&i, &v)| json!({"pile": i + 1, "value": v}))
            .collect(),
    )
}

fn cmd_sg(a: SgArgs) -> Result<Outcome> {
    let n = a.pos.len();
    let spec = GameSpec::new(n, a.k, a.ruleset.into())?;
    let inputs = json!({"ruleset": spec.ruleset.to_string(), "n": n, "k": a.k, "pos": a.pos.piles()});
    match spec.ruleset {
        Ruleset::ExactK => {
            let g = sg_value(&spec, &a.pos)?;
            let mut text = format!("sg: {g}\n");
            let mut result = json!({"sg": g});
            if n == 2 * a.k && a.k >= 2 {
                let p = sg_params(&spec, &a.pos)?;
                let kind = match p.kind {
                    PositionType::TypeI => "I",
                    PositionType::TypeII => "II",
                };
                text.push_str(&format!(
                    "params: u={} m={} y={} z={} v={} type={kind}\n",
                    p.u, p.m, p.y, p.z, p.v
                ));
                result["params"] = json!({
                    "u": p.u, "m": p.m, "y": p.y, "z": big(p.z), "v": big(p.v), "type": kind,
                });
            }
            Ok(Outcome::ok("sg", inputs, result, text))
        }
        Ruleset::MooreAtMostK => {
            let md = moore_m(&spec, &a.pos)?;
            let (verdict, sg) = if md.is_zero() {
                ("P-position", json!(0))
            } else if md.is_one() {
                ("1-position", json!(1))
            } else {
                ("undetermined", Value::Null)
            };
            let text = format!(
                "M: {}\nverdict: {verdict}\ndigits (low to high): {:?}\n",
                md.mvalue, md.ydigits
            );
            let result = json!({"m": m_json(&md), "digits": md.ydigits, "verdict": verdict, "sg": sg});
            Ok(Outcome::ok("sg", inputs, result, text))
        }
    }
}

fn cmd_tetris(a: TetrisArgs) -> Result<Outcome> {
    let n = a.pos.len();
    let spec = GameSpec::exact(n, a.k)?;
    let prof = tetris_fast(&spec, &a.pos)?;
    if !tetris_certificate(&spec, &a.pos, prof.tvalue) {
        return Err(Error::ConstructionFailed(format!(
            "T = {} fails its certificate at {}",
            prof.tvalue, a.pos
        )));
    }
    let sorted = normalize(&a.pos).sorted;
    let inputs = json!({"n": n, "k": a.k, "pos": a.pos.piles()});
    let result = json!({
        "t": prof.tvalue,
        "sorted": sorted.piles(),
        "xbar": prof.xbar.piles(),
        "ell": prof.ell,
        "alpha": prof.alpha,
        "beta": prof.beta,
    });
    let text = format!(
        "T: {}\nsorted: {}\nxbar: {}\nell: {} alpha: {} beta: {}\n",
        prof.tvalue,
        sorted.to_csv(),
        prof.xbar.to_csv(),
        prof.ell,
        prof.alpha,
        prof.beta
    );
    Ok(Outcome::ok("tetris", inputs, result, text))
}

fn cmd_move(a: MoveArgs) -> Result<Outcome> {
    let n = a.pos.len();
    let spec = GameSpec::new(n, a.k, a.ruleset.into())?;
    let moore_target = |t: u64| -> Result<(Move, &'static str, u64)> {
        let mv = if t == 0 {
            moore_move_to_zero(&spec, &a.pos)?
        } else {
            moore_move_to_one(&spec, &a.pos)?
        };
        Ok((mv, "m", t))
    };
    let (mv, kind, target) = match (spec.ruleset, a.target_sg, a.target_tetris, a.target_m) {
        (Ruleset::ExactK, Some(d), _, _) => (winning_move(&spec, &a.pos, d)?, "sg", d),
        (Ruleset::MooreAtMostK, Some(d), _, _) if d <= 1 => {
            let (mv, _, t) = moore_target(d)?;
            (mv, "sg", t)
        }
        (Ruleset::MooreAtMostK, Some(d), _, _) => {
            return Err(Error::UnsupportedCase(format!(
                "Moore's Nim moves are only constructed for SG 0 and 1, not {d}"
            )))
        }
        (Ruleset::ExactK, None, Some(g), _) => (move_to_tetris(&spec, &a.pos, g)?, "tetris", g),
        (Ruleset::MooreAtMostK, None, Some(_), _) => {
            return Err(Error::UnsupportedCase(
                "--target-tetris needs the exact ruleset".into(),
            ))
        }
        (Ruleset::MooreAtMostK, None, None, Some(t)) => moore_target(t)?,
        (Ruleset::ExactK, None, None, Some(_)) => {
            return Err(Error::UnsupportedCase("--target-m needs the moore ruleset".into()))
        }
        (_, None, None, None) => return Err(Error::Parse("no target given".into())),
    };
    if !is_legal_move(&spec, &a.pos, &mv) {
        return Err(Error::ConstructionFailed(format!("{mv} is not legal from {}", a.pos)));
    }
    let next = apply_move(&a.pos, &mv)?;
    let achieved = match (kind, spec.ruleset) {
        ("tetris", _) => tetris_value(spec.k, &next)?,
        ("sg", Ruleset::ExactK) => sg_value(&spec, &next)?,
        _ => {
            let md = moore_m(&spec, &next)?;
            md.to_u64().ok_or(Error::Overflow("M"))?
        }
    };
    if achieved != target {
        return Err(Error::ConstructionFailed(format!(
            "{mv} from {} reaches {kind} {achieved}, wanted {target}",
            a.pos
        )));
    }
    let inputs = json!({
        "ruleset": spec.ruleset.to_string(), "n": n, "k": a.k, "pos": a.pos.piles(),
        "target": target, "target_kind": kind,
    });
    let result = json!({"move": move_json(&mv), "successor": next.piles(), "achieved": achieved});
    let text = format!("move: {mv}\nsuccessor: {}\nachieved {kind}: {achieved}\n", next.to_csv());
    Ok(Outcome::ok("move", inputs, result, text))
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Sg => "sg",
        Check::Moves => "moves",
        Check::Moore01 => "moore01",
        Check::Corollary3 => "corollary3",
        Check::Tetris => "tetris",
    }
}

/// One verification pass: a failure description per bad position.
struct Tally {
    checked: u64,
    moves: u64,
    mismatches: u64,
    first: Option<String>,
}

impl Tally {
    fn fail(&mut self, what: String) {
        self.mismatches += 1;
        if self.first.is_none() {
            self.first = Some(what);
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome> {
    let spec = GameSpec::new(a.n, a.k, a.ruleset.into())?;
    let exact = spec.ruleset == Ruleset::ExactK;
    let needs_formula = matches!(a.check, Check::Sg | Check::Moves) && exact;
    if needs_formula && !formula_supported(&spec) {
        return Err(Error::UnsupportedCase(format!(
            "no SG formula for n = {}, k = {}",
            a.n, a.k
        )));
    }
    match (a.check, exact) {
        (Check::Sg, false) => {
            return Err(Error::UnsupportedCase(
                "Moore's Nim has no SG formula, use --check moore01".into(),
            ))
        }
        (Check::Moore01, true) => {
            return Err(Error::UnsupportedCase("moore01 needs the moore ruleset".into()))
        }
        (Check::Corollary3 | Check::Tetris, false) => {
            return Err(Error::UnsupportedCase(format!(
                "{} needs the exact ruleset",
                check_name(a.check)
            )))
        }
        (Check::Corollary3, true) if a.n != 2 * a.k => {
            return Err(Error::UnsupportedCase("corollary3 needs n = 2k".into()))
        }
        _ => {}
    }
    let raw = (a.max as u128 + 1)
        .checked_pow(a.n as u32)
        .filter(|&r| r <= a.budget as u128)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "{}^{} positions exceed the budget of {}",
                a.max + 1,
                a.n,
                a.budget
            ))
        })?;
    let table = if a.check == Check::Tetris {
        None
    } else {
        Some(build_table_with_budget(&spec, a.max, a.budget)?)
    };
    let mut longest: HashMap<Position, u64> = HashMap::new();
    let mut t = Tally {
        checked: 0,
        moves: 0,
        mismatches: 0,
        first: None,
    };
    for x in all_tuples(a.n, a.max) {
        let x = Position::new(x);
        t.checked += 1;
        match a.check {
            Check::Tetris => verify_tetris(&spec, &x, &mut longest, &mut t)?,
            c => {
                let table = table.as_ref().expect("table built for oracle checks");
                let g = table.get(&x).expect("table covers the box");
                match c {
                    Check::Sg => match sg_value(&spec, &x) {
                        Ok(f) if f == g => {}
                        Ok(f) => t.fail(format!("{x}: formula {f}, oracle {g}")),
                        Err(e) => t.fail(format!("{x}: {e}")),
                    },
                    Check::Moves if exact => verify_exact_moves(&spec, &x, g, table, &mut t),
                    Check::Moves => verify_moore_moves(&spec, &x, table, &mut t)?,
                    Check::Moore01 => {
                        let md = moore_m(&spec, &x)?;
                        if md.is_zero() != (g == 0) || md.is_one() != (g == 1) {
                            t.fail(format!("{x}: M {}, oracle {g}", md.mvalue));
                        }
                    }
                    Check::Corollary3 => {
                        let p = is_p_position(&spec, &x)?;
                        let one = is_one_position(&spec, &x)?;
                        if p != (g == 0) || one != (g == 1) {
                            t.fail(format!("{x}: P {p}, one {one}, oracle {g}"));
                        }
                    }
                    Check::Tetris => unreachable!(),
                }
            }
        }
    }
    let inputs = json!({
        "ruleset": spec.ruleset.to_string(), "n": a.n, "k": a.k, "max": a.max,
        "check": check_name(a.check),
    });
    let result = json!({
        "positions": big(raw),
        "checked": t.checked,
        "moves_checked": t.moves,
        "mismatches": t.mismatches,
        "first_counterexample": t.first,
    });
    let mut text = format!(
        "check: {}\npositions: {}\nmoves checked: {}\nmismatches: {}\n",
        check_name(a.check),
        t.checked,
        t.moves,
        t.mismatches
    );
    if let Some(f) = &t.first {
        text.push_str(&format!("first counterexample: {f}\n"));
    }
    let mut o = Outcome::ok("verify", inputs, result, text);
    if t.mismatches > 0 {
        o.code = EXIT_MISMATCH;
    }
    Ok(o)
}

fn verify_exact_moves(spec: &GameSpec, x: &Position, g: u64, table: &SgTable, t: &mut Tally) {
    for delta in 0..g {
        t.moves += 1;
        let reached = winning_move(spec, x, delta).and_then(|mv| {
            if !is_legal_move(spec, x, &mv) {
                return Err(Error::ConstructionFailed(format!("{mv} is illegal")));
            }
            apply_move(x, &mv)
        });
        match reached {
            Ok(next) => {
                let o = table.get(&next).expect("successor inside the box");
                if o != delta {
                    t.fail(format!("{x} -> {next}: wanted {delta}, oracle {o}"));
                }
            }
            Err(e) => t.fail(format!("{x} delta {delta}: {e}")),
        }
    }
    // no move keeps the formula value
    let f = match sg_value(spec, x) {
        Ok(f) => f,
        Err(e) => return t.fail(format!("{x}: {e}")),
    };
    for s in successors(spec, x) {
        if sg_value(spec, &s).ok() == Some(f) {
            t.fail(format!("{x} -> {s} keeps SG {f}"));
            break;
        }
    }
}

fn verify_moore_moves(spec: &GameSpec, x: &Position, table: &SgTable, t: &mut Tally) -> Result<()> {
    let md = moore_m(spec, x)?;
    let mut try_target = |want: u64| {
        t.moves += 1;
        let mv = if want == 0 {
            moore_move_to_zero(spec, x)
        } else {
            moore_move_to_one(spec, x)
        };
        let checked = mv.and_then(|mv| {
            if !is_legal_move(spec, x, &mv) {
                return Err(Error::ConstructionFailed(format!("{mv} is illegal")));
            }
            apply_move(x, &mv)
        });
        match checked {
            Ok(next) => {
                let m = moore_m(spec, &next).ok().and_then(|d| d.to_u64());
                let o = table.get(&next).expect("successor inside the box");
                if m != Some(want) || o != want {
                    t.fail(format!("{x} -> {next}: wanted {want}, M {m:?}, oracle {o}"));
                }
            }
            Err(e) => t.fail(format!("{x} to M {want}: {e}")),
        }
    };
    if !md.is_zero() {
        try_target(0);
    }
    if !md.is_zero() && !md.is_one() {
        try_target(1);
    }
    Ok(())
}

fn verify_tetris(
    spec: &GameSpec,
    x: &Position,
    longest: &mut HashMap<Position, u64>,
    t: &mut Tally,
) -> Result<()> {
    let fast = tetris_fast(spec, x)?.tvalue;
    let slow = longest_play_with(spec, x, longest)?;
    if fast != slow {
        t.fail(format!("{x}: fast {fast}, longest play {slow}"));
        return Ok(());
    }
    if !tetris_certificate(spec, x, fast) {
        t.fail(format!("{x}: certificate fails for T = {fast}"));
    }
    for g in 0..fast {
        match move_to_tetris(spec, x, g) {
            Ok(mv) => {
                t.moves += 1;
                let next = apply_move(x, &mv)?;
                let got = tetris_value(spec.k, &next)?;
                if !is_legal_move(spec, x, &mv) || got != g {
                    t.fail(format!("{x} -> {next}: wanted T {g}, got {got}"));
                }
            }
            // targets below T(x^l) are out of reach by design
            Err(Error::TargetOutOfRange { .. }) => {}
            Err(e) => t.fail(format!("{x} to T {g}: {e}")),
        }
    }
    Ok(())
}

fn cmd_table(a: TableArgs) -> Result<Outcome> {
    let spec = GameSpec::new(a.n, a.k, a.ruleset.into())?;
    let use_formula = formula_supported(&spec);
    let table = if use_formula {
        None
    } else {
        Some(build_table_with_budget(&spec, a.max, a.budget)?)
    };
    let source = if use_formula { "formula" } else { "oracle" };
    let mut rows: Vec<(Position, u64)> = Vec::new();
    for x in all_multisets(a.n, a.max) {
        if rows.len() >= a.budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {} canonical positions",
                a.budget
            )));
        }
        let x = Position::new(x);
        let g = match &table {
            Some(t) => t.get(&x).expect("table covers the box"),
            None => sg_value(&spec, &x)?,
        };
        rows.push((x, g));
    }
    let file = File::create(&a.out).map_err(|e| Error::Io(format!("{}: {e}", a.out.display())))?;
    let mut w = BufWriter::new(file);
    match a.format {
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["pos", "sg", "source"])?;
            for (x, g) in &rows {
                c.write_record([x.join(";"), g.to_string(), source.to_string()])?;
            }
            c.flush()?;
        }
        Format::Json => {
            let doc = json!({
                "ruleset": spec.ruleset.to_string(),
                "n": a.n,
                "k": a.k,
                "max": a.max,
                "rows": rows.iter().map(|(x, g)| json!({"pos": x.piles(), "sg": g, "source": source})).collect::<Vec<_>>(),
            });
            serde_json::to_writer(&mut w, &doc).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    let format = match a.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let path = a.out.display().to_string();
    let inputs = json!({
        "ruleset": spec.ruleset.to_string(), "n": a.n, "k": a.k, "max": a.max,
        "format": format, "out": path,
    });
    let result = json!({"path": path, "rows": rows.len(), "source": source});
    let text = format!("wrote {} rows ({source}) to {path}\n", rows.len());
    Ok(Outcome::ok("table", inputs, result, text))
}

/// No legal move remains.
fn is_terminal(spec: &GameSpec, x: &Position) -> bool {
    match spec.ruleset {
        Ruleset::ExactK => x.nonzero_count() < spec.k,
        Ruleset::MooreAtMostK => x.nonzero_count() == 0,
    }
}

/// Winning move when one is known, otherwise a move keeping the game as
/// long as possible.
pub fn engine_move(spec: &GameSpec, x: &Position) -> Result<Move> {
    match spec.ruleset {
        Ruleset::ExactK => {
            if formula_supported(spec) && sg_value(spec, x)? > 0 {
                return winning_move(spec, x, 0);
            }
            // one token off each of the k largest piles starts a longest play
            let view = normalize(x);
            let n = spec.n;
            Ok(Move::from_pairs(
                (n - spec.k..n).map(|i| (view.perm[i], view.sorted[i] - 1)),
            ))
        }
        Ruleset::MooreAtMostK => {
            if !moore_m(spec, x)?.is_zero() {
                return moore_move_to_zero(spec, x);
            }
            let view = normalize(x);
            let i = spec.n - 1;
            Ok(Move::from_pairs([(view.perm[i], view.sorted[i] - 1)]))
        }
    }
}

fn why_illegal(spec: &GameSpec, x: &Position, mv: &Move) -> String {
    if let Some((&i, _)) = mv.changes().iter().find(|(&i, _)| i >= x.len()) {
        return format!("there is no pile {}", i + 1);
    }
    if let Some((&i, &v)) = mv.changes().iter().find(|(&i, &v)| v >= x[i]) {
        return format!("pile {} has {} tokens and cannot go to {v}", i + 1, x[i]);
    }
    match spec.ruleset {
        Ruleset::ExactK => format!("a move changes exactly {} piles, got {}", spec.k, mv.len()),
        Ruleset::MooreAtMostK => format!("a move changes 1 to {} piles, got {}", spec.k, mv.len()),
    }
}

fn cmd_play(a: PlayArgs, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let spec = GameSpec::new(a.pos.len(), a.k, a.ruleset.into())?;
    let mut x = a.pos;
    let mut human = !a.engine_first;
    writeln!(out, "position: {}", x.to_csv())?;
    loop {
        if is_terminal(&spec, &x) {
            let winner = if human { "engine wins" } else { "you win" };
            writeln!(out, "no moves left, {winner}")?;
            return Ok(());
        }
        if human {
            write!(out, "your move> ")?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                return Ok(());
            }
            let line = line.trim();
            if line == "quit" || line == "q" {
                return Ok(());
            }
            let mv = match Move::parse_one_based(line) {
                Ok(mv) => mv,
                Err(e) => {
                    writeln!(err, "rejected: {e}")?;
                    continue;
                }
            };
            if !is_legal_move(&spec, &x, &mv) {
                writeln!(err, "rejected: {}", why_illegal(&spec, &x, &mv))?;
                continue;
            }
            x = apply_move(&x, &mv)?;
        } else {
            let mv = engine_move(&spec, &x)?;
            if !is_legal_move(&spec, &x, &mv) {
                return Err(Error::ConstructionFailed(format!("engine move {mv} is illegal")));
            }
            x = apply_move(&x, &mv)?;
            writeln!(out, "engine: {mv}")?;
        }
        writeln!(out, "position: {}", x.to_csv())?;
        human = !human;
    }
}

fn cmd_degseq(a: DegseqArgs) -> Result<Outcome> {
    let k = a.k as usize;
    let x = &a.pos;
    let ok = is_realizable(x, k);
    let mut result = json!({"realizable": ok, "sum": big(x.total())});
    let mut text = format!("realizable: {}\n", if ok { "yes" } else { "no" });
    if k <= x.len() {
        let t = tetris_value(k, x)?;
        result["tetris"] = json!(t);
        text.push_str(&format!("tetris: {t} (k T = {}, sum = {})\n", t as u128 * k as u128, x.total()));
    }
    if a.realize {
        let h = realize(x, k)?;
        if h.degrees() != x.piles() || !h.is_uniform(k) {
            return Err(Error::ConstructionFailed("realization does not recount".into()));
        }
        result["edges"] = Value::Array(
            h.edges
                .iter()
                .map(|e| json!(e.iter().map(|v| v + 1).collect::<Vec<_>>()))
                .collect(),
        );
        text.push_str(&format!("edges: {}\n{h}", h.edges.len()));
    }
    if a.correct {
        let c = minimal_correction(x, k);
        if !is_realizable(&c, k) || !c.dominated_by(x) {
            return Err(Error::ConstructionFailed(format!("correction {c} is invalid")));
        }
        result["corrected"] = json!(c.piles());
        text.push_str(&format!("corrected: {}\n", c.to_csv()));
    }
    let inputs = json!({"k": k, "pos": x.piles(), "realize": a.realize, "correct": a.correct});
    Ok(Outcome::ok("degseq", inputs, result, text))
}
