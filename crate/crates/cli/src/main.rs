use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permloc::blocks::{BlockConcatSpec, RangeRestrictedSpec};
use permloc::construction::extended;
use permloc::gf::{count_pp, enumerate_pp, pp_count_lower_bound, FieldSpec, PpMode};
use permloc::multiperm::{rate_table, AtSpec};
use permloc::windowed::{InfBallSpec, MediaSetSpec};
use permloc::{
    bounds, coset_census, max_set_search, verify_locality, Caps, ConstructionId, LocalityVerdict,
    NodeArray, PermSet, Scheme, SearchOutcome,
};

mod output;

use output::{Printer, Record};

#[derive(Parser)]
#[command(
    name = "permloc",
    version,
    about = "Permutation sets with symbol locality"
)]
struct Cli {
    /// Seed for any sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print aligned tables instead of key=value records.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a set and write it in PERMSET format.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check that a stored set has locality d.
    Verify {
        /// Locality to certify; defaults to the set's claimed locality.
        #[arg(long)]
        d: Option<usize>,
        pset: PathBuf,
    },
    /// Size bounds for sets of permutations with locality d.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Also report the rate of a set of this size.
        #[arg(long)]
        size: Option<String>,
    },
    /// Partition S_n by parity-code syndrome.
    CosetCensus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Print every coset count.
        #[arg(long)]
        histogram: bool,
    },
    /// Search for a subset of S_n of a given size with locality d.
    MaxSearch {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        target: usize,
        /// Where to write a witness set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count permutation polynomials of bounded degree over GF(2^m).
    PpCount(FieldArgs),
    /// List permutation polynomials, coefficients low to high.
    PpList {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erase nodes of a stored member and repair them.
    RepairSim {
        #[arg(long)]
        pset: PathBuf,
        /// Member row (0-based); random from the seed when omitted.
        #[arg(long)]
        member: Option<usize>,
        /// Positions to erase, comma separated.
        #[arg(long, value_delimiter = ',')]
        erase: Vec<usize>,
        /// Repair every single erasure of every member and report the worst case.
        #[arg(long, conflicts_with_all = ["member", "erase"])]
        sweep: bool,
    },
    /// Look up a symbol by position (q1) or a position by symbol (q2).
    Query {
        #[arg(long)]
        pset: PathBuf,
        #[arg(long)]
        member: Option<usize>,
        #[arg(long, conflicts_with = "q2")]
        q1: Option<usize>,
        #[arg(long)]
        q2: Option<usize>,
        /// Answer q2 by probing blocks instead of following the cycle.
        #[arg(long, requires = "q2")]
        block_probe: bool,
    },
    /// Exact sizes and rates of a family of sets.
    Rates {
        #[command(subcommand)]
        kind: RatesKind,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    BlockConcat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        out: OutArg,
    },
    RangeRestricted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        out: OutArg,
    },
    InfBall {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        out: OutArg,
    },
    Media {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    Extend {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        t: usize,
        /// Field degree; defaults to log2(n).
        #[arg(long)]
        m: Option<u32>,
        /// Inner set, as `block-concat:h=<h>`.
        #[arg(long, default_value = "block-concat:h=2")]
        inner: String,
        #[command(flatten)]
        out: OutArg,
    },
    Multiperm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    m: u32,
    /// Field modulus as an integer bit pattern; a fixed default otherwise.
    #[arg(long)]
    modulus: Option<u32>,
    #[arg(long, default_value_t = 4)]
    max_deg: usize,
    /// Enumerate every polynomial rather than normalized forms.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Subcommand)]
enum RatesKind {
    Multiperm {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("error=UsageError message=\"{first}\"");
            return ExitCode::from(2);
        }
    };
    let mut printer = Printer::new(cli.pretty);
    let result = run(&cli, &mut printer).and_then(|code| {
        printer.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let name = match e.downcast_ref::<permloc::Error>() {
                Some(pe) => pe.name(),
                None if e.downcast_ref::<std::io::Error>().is_some() => "IoError",
                None => "UsageError",
            };
            eprintln!("error={name} message=\"{e:#}\"");
            ExitCode::FAILURE
        }
    }
}

fn caps() -> Result<Caps> {
    match std::env::var("PERMLOC_CAP") {
        Ok(spec) => Caps::default().with_overrides(&spec).context("PERMLOC_CAP"),
        Err(_) => Ok(Caps::default()),
    }
}

fn run(cli: &Cli, p: &mut Printer) -> Result<ExitCode> {
    let caps = caps()?;
    match &cli.command {
        Command::Construct { kind } => construct(kind, &caps, p)?,
        Command::Verify { d, pset } => return verify(pset, *d, &caps, p),
        Command::Bounds { n, d, size } => {
            let mut rep = bounds(*n, *d)?;
            if let Some(s) = size {
                rep = rep.with_size(
                    &s.parse()
                        .map_err(|_| anyhow!("--size: not an integer: {s}"))?,
                );
            }
            let mut r = Record::new()
                .kv("n", rep.n)
                .kv("d", rep.d)
                .kv("upper_general", &rep.upper_general);
            if let Some(u) = &rep.upper_d1 {
                r = r.kv("upper_d1", u);
            }
            r = r
                .kv("lower", &rep.lower_existential)
                .kv("adapted", rep.adapted)
                .kv("lrc_rate_bound", &rep.lrc_rate_bound);
            if let Some(rate) = rep.rate_of {
                r = r.kv("rate", format!("{rate:.6}"));
            }
            p.push(r);
        }
        Command::CosetCensus { n, d, histogram } => {
            let c = coset_census(*n, *d, &caps)?;
            p.push(
                Record::new()
                    .kv("n", c.n)
                    .kv("d", c.d)
                    .kv("cosets", c.cosets)
                    .kv("total", c.total())
                    .kv("max", c.max_count)
                    .kv("argmax", c.argmax)
                    .kv("pigeonhole", c.pigeonhole_bound()),
            );
            if *histogram {
                for (i, count) in c.histogram.iter().enumerate() {
                    p.push(Record::new().kv("syndrome", i).kv("count", count));
                }
            }
        }
        Command::MaxSearch { n, d, target, out } => match max_set_search(*n, *d, *target, &caps)? {
            SearchOutcome::Witness { set, helpers } => {
                let sets: Vec<String> = helpers.iter().map(|h| join(h, ",")).collect();
                if let Some(path) = out {
                    write_set(&set, Some(path))?;
                }
                p.push(
                    Record::new()
                        .kv("outcome", "witness")
                        .kv("n", n)
                        .kv("d", d)
                        .kv("size", set.len())
                        .kv("helpers", sets.join(";")),
                );
            }
            SearchOutcome::Exhausted { assignments, nodes } => p.push(
                Record::new()
                    .kv("outcome", "exhausted")
                    .kv("n", n)
                    .kv("d", d)
                    .kv("target", target)
                    .kv("assignments", assignments)
                    .kv("nodes", nodes),
            ),
        },
        Command::PpCount(f) => {
            let field = field(f)?;
            let count = if f.exhaustive {
                enumerate_pp(&field, f.max_deg, PpMode::Exhaustive, &caps)?.len() as u128
            } else {
                count_pp(&field, f.max_deg, &caps)?
            };
            let mut r = Record::new()
                .kv("m", field.m())
                .kv("n", field.size())
                .kv("max_deg", f.max_deg)
                .kv("count", count);
            if f.max_deg == 4 {
                r = r.kv("bound", pp_count_lower_bound(field.size()));
            }
            p.push(r);
        }
        Command::PpList { field: f, out } => {
            let field = field(f)?;
            let mode = if f.exhaustive {
                PpMode::Exhaustive
            } else {
                PpMode::Normalized
            };
            let polys = enumerate_pp(&field, f.max_deg, mode, &caps)?;
            let mut w = sink(out.as_deref())?;
            for poly in &polys {
                writeln!(w, "{}", join(&poly.padded(f.max_deg + 1), " "))?;
            }
            w.flush()?;
            if out.is_some() {
                p.push(
                    Record::new()
                        .kv("m", field.m())
                        .kv("count", polys.len())
                        .kv("out", display(out)),
                );
            }
        }
        Command::RepairSim {
            pset,
            member,
            erase,
            sweep,
        } => {
            let set = read_set(pset)?;
            let scheme = Scheme::for_set(&set, &caps)?;
            if *sweep {
                repair_sweep(&set, &scheme, p)?;
            } else {
                if erase.is_empty() {
                    bail!("--erase needs at least one position");
                }
                let row = pick_row(&set, *member, cli.seed)?;
                let mut nodes = NodeArray::store(&scheme, set.members()[row].clone())?;
                nodes.erase(erase)?;
                for r in nodes.repair_all()? {
                    p.push(
                        Record::new()
                            .kv("member", row)
                            .kv("position", r.position)
                            .kv("symbol", r.symbol)
                            .kv("accesses", r.accesses())
                            .kv("accessed", join(&r.accessed, ",")),
                    );
                }
            }
        }
        Command::Query {
            pset,
            member,
            q1,
            q2,
            block_probe,
        } => {
            let set = read_set(pset)?;
            let scheme = Scheme::for_set(&set, &caps)?;
            let row = pick_row(&set, *member, cli.seed)?;
            let mut nodes = NodeArray::store(&scheme, set.members()[row].clone())?;
            match (q1, q2) {
                (Some(i), None) => {
                    let (s, q) = nodes.q1(*i)?;
                    p.push(
                        Record::new()
                            .kv("member", row)
                            .kv("q1", i)
                            .kv("symbol", s)
                            .kv("queries", q),
                    );
                }
                (None, Some(i)) => {
                    let (pos, q) = if *block_probe {
                        nodes.q2_block_probe(*i)?
                    } else {
                        nodes.q2(*i)?
                    };
                    p.push(
                        Record::new()
                            .kv("member", row)
                            .kv("q2", i)
                            .kv("position", pos)
                            .kv("queries", q),
                    );
                }
                _ => bail!("give exactly one of --q1 or --q2"),
            }
        }
        Command::Rates {
            kind: RatesKind::Multiperm { n, t },
        } => {
            for row in rate_table(n, t)? {
                p.push(
                    Record::new()
                        .kv("n", row.n)
                        .kv("t", row.t)
                        .kv("size", &row.size)
                        .kv("rate", format!("{:.6}", row.rate)),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn construct(kind: &ConstructKind, caps: &Caps, p: &mut Printer) -> Result<()> {
    let (set, out) = match kind {
        ConstructKind::BlockConcat { n, h, out } => {
            (BlockConcatSpec::new(*n, *h)?.generate(caps)?, out)
        }
        ConstructKind::RangeRestricted { n, h, out } => {
            (RangeRestrictedSpec::new(*n, *h)?.generate(caps)?, out)
        }
        ConstructKind::InfBall { n, r, out } => (InfBallSpec::new(*n, *r)?.generate(caps)?, out),
        ConstructKind::Media { n, out } => (MediaSetSpec::new(*n)?.generate(caps)?, out),
        ConstructKind::Extend {
            n,
            t,
            m,
            inner,
            out,
        } => {
            let h = match inner.parse::<ConstructionId>() {
                Ok(ConstructionId::BlockConcat { h }) => h,
                _ => bail!("--inner: expected block-concat:h=<h>, got {inner}"),
            };
            let m = match m {
                Some(m) => *m,
                None if n.is_power_of_two() => n.trailing_zeros(),
                None => bail!("--m: n={n} is not a power of two"),
            };
            (extended(*n, *t, m, h, caps)?.generate(caps)?, out)
        }
        ConstructKind::Multiperm { n, t, out } => (AtSpec::new(*n, *t)?.generate(caps)?, out),
    };
    write_set(&set, out.out.as_deref())?;
    if out.out.is_some() {
        p.push(
            Record::new()
                .kv("construction", set.construction())
                .kv("n", set.n())
                .kv("size", set.len())
                .kv(
                    "d",
                    set.claimed_locality()
                        .map_or("-".to_string(), |d| d.to_string()),
                )
                .kv("out", display(&out.out)),
        );
    }
    Ok(())
}

fn verify(path: &Path, d: Option<usize>, caps: &Caps, p: &mut Printer) -> Result<ExitCode> {
    let set = read_set(path)?;
    let d = d
        .or(set.claimed_locality())
        .ok_or_else(|| anyhow!("--d is required when the set claims no locality"))?;
    let r = Record::new()
        .kv("n", set.n())
        .kv("size", set.len())
        .kv("d", d);
    match verify_locality(&set, d, caps)? {
        LocalityVerdict::Certified(map) => {
            let sets: Vec<String> = map.helper_sets().iter().map(|h| join(h, ",")).collect();
            p.push(r.kv("verify", "ok").kv("helpers", sets.join(";")));
            Ok(ExitCode::SUCCESS)
        }
        LocalityVerdict::Fails { position } => {
            p.push(r.kv("verify", "fail").kv("position", position));
            Ok(ExitCode::from(1))
        }
    }
}

fn repair_sweep(set: &PermSet, scheme: &Scheme, p: &mut Printer) -> Result<()> {
    let mut worst = 0;
    let mut cases = 0u64;
    for m in set.members() {
        for j in 0..set.n() {
            let mut nodes = NodeArray::store(scheme, m.clone())?;
            nodes.erase(&[j])?;
            let r = nodes.repair(j)?;
            if r.symbol != m.get(j) {
                bail!("wrong symbol repaired at position {j} of {m}");
            }
            worst = worst.max(r.accesses());
            cases += 1;
        }
    }
    p.push(
        Record::new()
            .kv("members", set.len())
            .kv("cases", cases)
            .kv("max_accesses", worst)
            .kv("locality", scheme.locality()),
    );
    Ok(())
}

fn field(f: &FieldArgs) -> Result<FieldSpec> {
    Ok(match f.modulus {
        Some(modulus) => FieldSpec::with_modulus(f.m, modulus)?,
        None => FieldSpec::new(f.m)?,
    })
}

fn pick_row(set: &PermSet, member: Option<usize>, seed: u64) -> Result<usize> {
    match member {
        Some(row) if row < set.len() => Ok(row),
        Some(row) => bail!("--member {row}: set has {} members", set.len()),
        None => Ok(ChaCha8Rng::seed_from_u64(seed).gen_range(0..set.len())),
    }
}

fn read_set(path: &Path) -> Result<PermSet> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(PermSet::read_from(BufReader::new(f))?)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn write_set(set: &PermSet, path: Option<&Path>) -> Result<()> {
    let mut w = sink(path)?;
    set.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn join(items: &[usize], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn display(path: &Option<PathBuf>) -> String {
    path.as_ref()
        .map_or_else(String::new, |p| p.display().to_string())
}
