//! Command-line front end: build, query, verify, stats, bench.
//!
//! Exit codes: 0 success, 1 verification failure or damaged index, 2 usage or
//! I/O error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench;
use crate::error::Error;
use crate::file;
use crate::movetab::{Coords, MoveTable};
use crate::psi::{verify_index, PsiIndex, SpaceReport};
use crate::text::{Convention, OracleKind, SuffixStructures, Text};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "rlpsi", version, about = "Run-length compressed index with constant-time psi steps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Suffix,
    Rotation,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Suffix => Convention::SuffixOrder,
            ConventionArg::Rotation => Convention::RotationOrder,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Psi,
    Lf,
    Phi,
    PhiInv,
}

impl OpArg {
    fn kind(self) -> OracleKind {
        match self {
            OpArg::Psi => OracleKind::Psi,
            OpArg::Lf => OracleKind::Lf,
            OpArg::Phi => OracleKind::Phi,
            OpArg::PhiInv => OracleKind::PhiInv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index from a text file
    Build {
        input: PathBuf,
        output: PathBuf,
        /// Balancing parameter; steps scan at most 2d sub-runs
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, value_enum, default_value = "suffix")]
        convention: ConventionArg,
        /// Append a unique symbol smaller than every byte
        #[arg(long)]
        append_sentinel: bool,
    },
    /// Apply psi, LF, phi or phi^-1 one or more times
    Query {
        index: PathBuf,
        #[arg(long, value_enum, default_value = "psi")]
        op: OpArg,
        #[arg(long, conflicts_with = "coords", required_unless_present = "coords")]
        pos: Option<usize>,
        /// Starting coordinates as RUN,OFFSET
        #[arg(long, value_parser = parse_coords)]
        coords: Option<Coords>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Source text; required for phi and phi-inv
        #[arg(long)]
        text: Option<PathBuf>,
    },
    /// Check an index exhaustively against the text it was built from
    Verify { index: PathBuf, input: PathBuf },
    /// Print space accounting and structure statistics
    Stats {
        index: PathBuf,
        /// Emit key=value lines
        #[arg(long)]
        machine: bool,
        /// Fail unless r'(d-1) <= d*r
        #[arg(long)]
        strict: bool,
    },
    /// Time iterated psi and LF steps
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        queries: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn parse_coords(s: &str) -> Result<Coords, String> {
    let (run, offset) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RUN,OFFSET, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Coords::new(parse(run)?, parse(offset)?))
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Checksum { .. } | Error::Format(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8, Failure> {
    match command {
        Command::Build {
            input,
            output,
            d,
            convention,
            append_sentinel,
        } => cmd_build(&input, &output, d, convention.into(), append_sentinel, out),
        Command::Query {
            index,
            op,
            pos,
            coords,
            steps,
            text,
        } => cmd_query(&index, op, pos, coords, steps, text.as_deref(), out),
        Command::Verify { index, input } => cmd_verify(&index, &input, out),
        Command::Stats {
            index,
            machine,
            strict,
        } => cmd_stats(&index, machine, strict, out),
        Command::Bench {
            index,
            queries,
            seed,
        } => cmd_bench(&index, queries, seed, out),
    }
}

pub fn load_index(path: &Path) -> Result<PsiIndex, Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(file::from_bytes(&bytes)?)
}

fn read_text(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Re-ingests `bytes` the way `idx` was built and checks the alphabets agree.
fn matching_text(idx: &PsiIndex, bytes: &[u8]) -> Result<Text, Failure> {
    let text = Text::ingest(bytes, idx.convention(), idx.alphabet().has_sentinel())?;
    if text.len() != idx.n() || text.alphabet() != idx.alphabet() {
        return Err(Failure {
            code: EXIT_FAILED,
            message: format!(
                "text does not match index (n = {} vs {}, sigma = {} vs {})",
                text.len(),
                idx.n(),
                text.sigma(),
                idx.sigma()
            ),
        });
    }
    Ok(text)
}

fn cmd_build(
    input: &Path,
    output: &Path,
    d: usize,
    convention: Convention,
    sentinel: bool,
    out: &mut dyn Write,
) -> Result<u8, Failure> {
    if d < 2 {
        return Err(usage(format!("--d must be at least 2, got {d}")));
    }
    let bytes = read_text(input)?;
    let text = Text::ingest(&bytes, convention, sentinel)?;
    let structures = SuffixStructures::build(&text);
    let idx = PsiIndex::build_with(&text, &structures, d)?;
    let f = File::create(output).map_err(|e| usage(format!("{}: {e}", output.display())))?;
    file::write_index(&idx, BufWriter::new(f))?;
    writeln!(
        out,
        "built {}: n={} sigma={} r={} r'={} d={} convention={}",
        output.display(),
        idx.n(),
        idx.sigma(),
        structures.bwt_runs(),
        idx.r_prime(),
        d,
        convention
    )?;
    Ok(EXIT_OK)
}

fn move_table(idx: &PsiIndex, kind: OracleKind, text: Option<&Path>) -> Result<MoveTable, Failure> {
    match kind {
        OracleKind::Lf => Ok(idx.lf_table()?),
        OracleKind::Phi | OracleKind::PhiInv => {
            let path = text.ok_or_else(|| usage(format!("--op {} needs --text", kind.name())))?;
            let text = matching_text(idx, &read_text(path)?)?;
            let s = SuffixStructures::build(&text);
            Ok(MoveTable::for_kind(&s, kind, idx.d())?)
        }
        OracleKind::Psi => unreachable!("psi is answered by the index"),
    }
}

fn cmd_query(
    path: &Path,
    op: OpArg,
    pos: Option<usize>,
    coords: Option<Coords>,
    steps: usize,
    text: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, Failure> {
    let idx = load_index(path)?;
    let name = op.kind().name();
    if op == OpArg::Psi {
        let mut c = match (pos, coords) {
            (Some(j), _) => idx.coords_of_position(j)?,
            (None, Some(c)) => {
                idx.position_of_coords(c)?;
                c
            }
            (None, None) => return Err(usage("one of --pos or --coords is required")),
        };
        for _ in 0..steps {
            let s = idx.psi_step(c)?;
            writeln!(out, "{name}={} coords=({},{})", s.position, s.coords.run, s.coords.offset)?;
            c = s.coords;
        }
    } else {
        let table = move_table(&idx, op.kind(), text)?;
        let mut c = match (pos, coords) {
            (Some(j), _) => table.locate(j)?,
            (None, Some(c)) => {
                table.position(c)?;
                c
            }
            (None, None) => return Err(usage("one of --pos or --coords is required")),
        };
        for _ in 0..steps {
            let s = table.step(c)?;
            writeln!(out, "{name}={} coords=({},{})", s.position, s.coords.run, s.coords.offset)?;
            c = s.coords;
        }
    }
    Ok(EXIT_OK)
}

/// Exhaustive move-table check against one oracle.
fn check_table(table: &MoveTable, structures: &SuffixStructures, kind: OracleKind) -> (usize, usize) {
    let oracle = structures.oracle(kind);
    let mut mismatches = 0;
    let mut max_probes = 0;
    for j in 0..oracle.len() {
        let s = table.step_unchecked(table.locate(j).expect("j < n"));
        if s.position != oracle.get(j) {
            mismatches += 1;
        }
        max_probes = max_probes.max(s.probes);
    }
    (mismatches, max_probes)
}

fn cmd_verify(index: &Path, input: &Path, out: &mut dyn Write) -> Result<u8, Failure> {
    let idx = load_index(index)?;
    let text = matching_text(&idx, &read_text(input)?)?;
    let structures = SuffixStructures::build(&text);
    let d = idx.d();

    let rebuilt = PsiIndex::build_with(&text, &structures, d)?;
    let same_build = rebuilt == idx;
    let report = verify_index(&idx, &structures.oracle(OracleKind::Psi));
    writeln!(out, "psi positions={} mismatches={} max_probes={} bound={}", report.positions, report.mismatches, report.max_probes, 2 * d)?;
    writeln!(
        out,
        "psi lower_bound={} coords={} rank_path={} head_alignment={} interleave={} cycle={} tau_blocks_increasing={}",
        report.lower_bound_ok,
        report.coords_consistent,
        report.rank_path_ok,
        report.head_alignment_ok,
        report.interleave_ok,
        report.cycle_ok,
        report.tau_blocks_increasing
    )?;
    writeln!(out, "index matches rebuild: {same_build}")?;
    let mut pass = report.pass && same_build;

    for kind in [OracleKind::Lf, OracleKind::Phi, OracleKind::PhiInv] {
        let table = MoveTable::for_kind(&structures, kind, d)?;
        let (mismatches, probes) = check_table(&table, &structures, kind);
        let ok = mismatches == 0 && probes <= 2 * d;
        writeln!(
            out,
            "{} rows={} mismatches={mismatches} max_probes={probes} {}",
            kind.name(),
            table.rows(),
            if ok { "ok" } else { "FAIL" }
        )?;
        pass &= ok;
    }
    // LF as recovered from the file alone.
    let (mismatches, probes) = check_table(&idx.lf_table()?, &structures, OracleKind::Lf);
    let ok = mismatches == 0 && probes <= 2 * d;
    writeln!(out, "lf-from-index mismatches={mismatches} max_probes={probes} {}", if ok { "ok" } else { "FAIL" })?;
    pass &= ok;

    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" })?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}

/// Everything `stats` prints.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsReport {
    pub space: SpaceReport,
    pub r: usize,
    pub convention: Convention,
    pub sentinel: bool,
    /// Largest ψ scan over a full sweep of positions.
    pub max_probes: usize,
}

impl StatsReport {
    pub fn from_index(idx: &PsiIndex) -> Self {
        let mut max_probes = 0;
        for i in 0..idx.r_prime() {
            let len = idx.bf().select1(i + 2).unwrap_or(idx.n()) - idx.bf().select1(i + 1).expect("i < r'");
            for g in 0..len {
                max_probes = max_probes.max(idx.psi_step_unchecked(Coords::new(i, g)).probes);
            }
        }
        StatsReport {
            space: idx.space_report(),
            r: idx.bwt_runs(),
            convention: idx.convention(),
            sentinel: idx.alphabet().has_sentinel(),
            max_probes,
        }
    }

    /// `r'(d − 1) ≤ d·r`.
    pub fn growth_ok(&self) -> bool {
        self.space.r_prime * (self.space.d - 1) <= self.space.d * self.r
    }

    pub fn lines(&self) -> Vec<(&'static str, String)> {
        let s = &self.space;
        vec![
            ("n", s.n.to_string()),
            ("sigma", s.sigma.to_string()),
            ("convention", self.convention.to_string()),
            ("sentinel", self.sentinel.to_string()),
            ("r", self.r.to_string()),
            ("r_prime", s.r_prime.to_string()),
            ("d", s.d.to_string()),
            ("tau_bits", s.tau_bits.to_string()),
            ("tau_block_bits", s.tau_blocks_bits.to_string()),
            ("bl_bits", s.bl_bits.to_string()),
            ("bl_aux_bits", s.bl_aux_bits.to_string()),
            ("bf_bits", s.bf_bits.to_string()),
            ("bf_aux_bits", s.bf_aux_bits.to_string()),
            ("bfl_bits", s.bfl_bits.to_string()),
            ("bfl_aux_bits", s.bfl_aux_bits.to_string()),
            ("metadata_bits", s.metadata_bits.to_string()),
            ("total_bits", s.total_bits.to_string()),
            ("ref_r_log_n_over_r", format!("{:.1}", s.ref_sparse)),
            ("ref_r_log_sigma", format!("{:.1}", s.ref_sigma)),
            ("ref_r_log_r", format!("{:.1}", s.ref_tau)),
            ("max_probes", self.max_probes.to_string()),
            ("probe_bound", (2 * s.d).to_string()),
        ]
    }
}

fn cmd_stats(path: &Path, machine: bool, strict: bool, out: &mut dyn Write) -> Result<u8, Failure> {
    let idx = load_index(path)?;
    let stats = StatsReport::from_index(&idx);
    let lines = stats.lines();
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in &lines {
        if machine {
            writeln!(out, "{k}={v}")?;
        } else {
            writeln!(out, "{k:<width$}  {v:>12}")?;
        }
    }
    if strict && !stats.growth_ok() {
        writeln!(out, "strict: r'(d-1) <= d*r violated")?;
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_bench(path: &Path, queries: usize, seed: u64, out: &mut dyn Write) -> Result<u8, Failure> {
    let idx = load_index(path)?;
    let lf = idx.lf_table()?;
    let report = bench::run(&idx, Some(&lf), queries, seed);
    writeln!(out, "queries={} seed={} start={} n={} r'={} d={}", queries, seed, report.start, idx.n(), idx.r_prime(), idx.d())?;
    let bound = 2 * idx.d();
    let mut ok = true;
    for (name, timing) in [("psi", &report.psi), ("lf", &report.lf)] {
        if let Some(t) = timing {
            writeln!(
                out,
                "{name}: steps={} ns_per_step={:.2} max_probes={} bound={bound}",
                t.steps,
                t.ns_per_step(),
                t.max_probes
            )?;
            ok &= t.max_probes <= bound;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_argument() {
        assert_eq!(parse_coords("4,3").unwrap(), Coords::new(4, 3));
        assert_eq!(parse_coords(" 10 , 1").unwrap(), Coords::new(10, 1));
        assert!(parse_coords("4").is_err());
        assert!(parse_coords("a,1").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["rlpsi", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["rlpsi", "query", "x.idx", "--op", "sideways", "--pos", "1"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["rlpsi", "stats", "/nonexistent/file"], &mut out, &mut err), EXIT_USAGE);
    }
}
