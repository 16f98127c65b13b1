//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use permloc::blocks::{BlockConcatSpec, RangeRestrictedSpec};
use permloc::construction::{extended, Construction};
use permloc::extend::odot;
use permloc::gf::{enumerate_pp, pp_count_lower_bound, FieldSpec, PpMode};
use permloc::locality::double_factorial;
use permloc::multiperm::{
    assign, count_bt, enumerate_bt, AtSpec, MultiPermutation, PairAssignment,
};
use permloc::windowed::{InfBallSpec, MediaSetSpec};
use permloc::{
    bounds, coset_census, enumerate_sn, max_set_search, verify_locality, Caps, ConstructionId,
    ErasedView, LocalRepair, NodeArray, PermSet, Permutation, Scheme, SearchOutcome,
};

/// Slack for comparing floating-point rates against exact bounds.
const RATE_TOL: f64 = 1e-12;
/// Random members sampled for the query criterion.
const QUERY_SAMPLES: usize = 1000;
const QUERY_SEED: u64 = 2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn caps() -> Caps {
    Caps::default()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

fn certified(set: &PermSet, d: usize) -> bool {
    verify_locality(set, d, &caps())
        .map(|v| v.is_certified())
        .unwrap_or(false)
}

fn sn(n: usize) -> Vec<Permutation> {
    enumerate_sn(n, &caps()).unwrap().collect()
}

fn tightness_at_four() -> Outcome {
    let set = BlockConcatSpec::new(4, 2)
        .unwrap()
        .generate(&caps())
        .unwrap();
    ensure!(set.len() == 8, "|block_concat(4,2)| = {}", set.len());
    ensure!(big(8) == double_factorial(4), "4!! mismatch");
    ensure!(certified(&set, 1), "block_concat(4,2) not certified at d=1");
    match max_set_search(4, 1, 9, &caps()).map_err(|e| e.to_string())? {
        SearchOutcome::Exhausted { assignments, nodes } => Ok(format!(
            "8 members, locality 1; no 9-member set ({assignments} assignments, {nodes} nodes)"
        )),
        SearchOutcome::Witness { .. } => Err("found a 9-member locality-1 subset of S_4".into()),
    }
}

fn size_formulas() -> Outcome {
    let pairs = [(4, 2), (6, 2), (6, 3), (8, 2), (8, 4)];
    for (n, h) in pairs {
        let got = BlockConcatSpec::new(n, h)
            .unwrap()
            .generate(&caps())
            .unwrap()
            .len();
        let want = factorial(h).pow((n / h) as u32) * factorial(n / h);
        ensure!(
            big(got) == want,
            "block_concat({n},{h}) = {got}, formula {want}"
        );
        let got = RangeRestrictedSpec::new(n, h)
            .unwrap()
            .generate(&caps())
            .unwrap()
            .len();
        let want = big(n) * factorial(h - 1) * factorial(n - h);
        ensure!(
            big(got) == want,
            "range_restricted({n},{h}) = {got}, formula {want}"
        );
    }
    Ok(format!("{} parameter pairs for both families", pairs.len()))
}

fn locality_certification() -> Outcome {
    let c = caps();
    let mut checked = 0;
    let mut check = |set: PermSet, d: usize| -> Result<(), String> {
        ensure!(
            certified(&set, d),
            "{} at n={} not certified at d={d}",
            set.construction(),
            set.n()
        );
        checked += 1;
        Ok(())
    };
    for (n, h) in [(4, 2), (6, 2), (6, 3), (8, 2), (8, 4)] {
        check(
            BlockConcatSpec::new(n, h).unwrap().generate(&c).unwrap(),
            h - 1,
        )?;
        check(
            RangeRestrictedSpec::new(n, h)
                .unwrap()
                .generate(&c)
                .unwrap(),
            n - h - 1,
        )?;
    }
    for n in 3..=8 {
        for r in 1..=2usize.min(n - 1) {
            check(InfBallSpec::new(n, r).unwrap().generate(&c).unwrap(), 4 * r)?;
        }
        check(MediaSetSpec::new(n).unwrap().generate(&c).unwrap(), 4)?;
    }
    for n in [4, 6, 8] {
        for t in 1..=2 {
            check(AtSpec::new(n, t).unwrap().generate(&c).unwrap(), 4 * t)?;
        }
    }
    let ext = extended(8, 6, 3, 2, &c).unwrap().generate(&c).unwrap();
    let ext_len = ext.len();
    check(ext, 6)?;
    Ok(format!(
        "{checked} sets certified, extended set at n=8 has {ext_len} members"
    ))
}

// Bijectivity by sorting the image, independent of the library's bitset test.
fn bijective_by_sort(f: &FieldSpec, coeffs: &[usize]) -> bool {
    let mut img: Vec<usize> = (0..f.size()).map(|x| f.eval(coeffs, x)).collect();
    img.sort_unstable();
    img.iter().enumerate().all(|(i, &v)| i == v)
}

fn polynomial_counts() -> Outcome {
    let c = caps();
    let mut report = Vec::new();
    for m in [3u32, 4] {
        let f = FieldSpec::new(m).unwrap();
        let n = f.size();
        let ex = enumerate_pp(&f, 4, PpMode::Exhaustive, &c).map_err(|e| e.to_string())?;
        let norm = enumerate_pp(&f, 4, PpMode::Normalized, &c).map_err(|e| e.to_string())?;
        ensure!(
            ex == norm,
            "GF({n}): exhaustive and normalized lists differ"
        );
        let bound = pp_count_lower_bound(n);
        ensure!(ex.len() as u128 >= bound, "GF({n}): {} < {bound}", ex.len());
        let listed: HashSet<Vec<usize>> = ex.iter().map(|p| p.padded(5)).collect();
        for code in 0..n.pow(5) {
            let coeffs: Vec<usize> = (0..5).map(|i| code / n.pow(i) % n).collect();
            ensure!(
                listed.contains(&coeffs) == bijective_by_sort(&f, &coeffs),
                "GF({n}): classification wrong for {coeffs:?}"
            );
        }
        report.push(format!("GF({n}) {} >= {bound}", ex.len()));
    }
    Ok(report.join(", "))
}

fn replacement_example() -> Outcome {
    let p = Permutation::from_one_based(&[1, 2, 3, 4]).unwrap();
    let e = [2, 3, 6];
    let got = odot(&p, &e)
        .map_err(|e| e.to_string())?
        .to_one_based_string();
    ensure!(got == "1 2 5 6 3 4 7", "got ({got})");
    Ok(format!("({got})"))
}

fn extended_repair() -> Outcome {
    let c = caps();
    let spec = extended(8, 6, 3, 2, &c).unwrap();
    let bound = spec.claimed_locality();
    ensure!(bound == 6, "claimed locality {bound}");
    let set = spec.generate(&c).unwrap();
    ensure!(
        set.len() == spec.inner().len() * spec.code().len()
            && spec.code().len() as u128 >= pp_count_lower_bound(8),
        "size {} != |S||T|",
        set.len()
    );
    let mut worst = 0;
    for m in set.members() {
        for j in 0..8 {
            let r = spec
                .repair(&ErasedView::new(m, &[j]).unwrap())
                .map_err(|e| e.to_string())?;
            ensure!(r.symbol == m.get(j), "wrong symbol at {j} of {m}");
            worst = worst.max(r.accesses());
        }
    }
    ensure!(worst <= bound, "{worst} accesses > {bound}");
    Ok(format!("{} x 8 erasures, max {worst} accesses", set.len()))
}

fn pair_assignment() -> Outcome {
    let c = caps();
    let mp = MultiPermutation::from_one_based(&[1, 1, 2, 3, 2, 3]).unwrap();
    let g = PairAssignment::new(vec![[0, 1], [3, 2], [5, 4]]).unwrap();
    let sigma = assign(&mp, &g).unwrap().to_one_based_string();
    ensure!(sigma == "1 2 4 6 3 5", "sigma = ({sigma})");
    for n in [4, 6, 8] {
        let a1 = AtSpec::new(n, 1).unwrap().generate(&c).unwrap();
        let bc = BlockConcatSpec::new(n, 2).unwrap().generate(&c).unwrap();
        ensure!(
            a1.same_members(&bc),
            "A_1({n}) differs from block_concat({n},2)"
        );
        for t in 1..n {
            let a = AtSpec::new(n, t).unwrap().generate(&c).unwrap();
            let bt = enumerate_bt(n / 2, t, &c).unwrap().len();
            ensure!(
                a.len() == bt << (n / 2),
                "|A_{t}({n})| = {} vs 2^{}*{bt}",
                a.len(),
                n / 2
            );
            ensure!(
                count_bt(n / 2, t).unwrap() == big(bt),
                "counted |B_{t}| differs at n={n}"
            );
        }
    }
    let b1 = enumerate_bt(3, 1, &c).unwrap().len();
    let full = enumerate_bt(3, 5, &c).unwrap().len();
    ensure!(b1 == 6 && full == 90, "|B_1| = {b1}, |S_(3,2)| = {full}");
    Ok(format!(
        "sigma = ({sigma}), |B_1| = {b1}, |S_(3,2)| = {full}"
    ))
}

fn window_repair() -> Outcome {
    let c = caps();
    let mut cases = 0;
    for n in [6, 8, 10] {
        for t in 1..=2 {
            let spec = AtSpec::new(n, t).unwrap();
            for m in spec.generate(&c).unwrap().members() {
                for j in 0..n {
                    let r = spec
                        .repair(&ErasedView::new(m, &[j]).unwrap())
                        .map_err(|e| format!("n={n} t={t} {m} at {j}: {e}"))?;
                    ensure!(
                        r.symbol == m.get(j),
                        "n={n} t={t}: wrong symbol at {j} of {m}"
                    );
                    ensure!(
                        r.accesses() <= 4 * t,
                        "n={n} t={t}: {} accesses",
                        r.accesses()
                    );
                    cases += 1;
                }
            }
        }
    }
    Ok(format!(
        "{cases} erasures repaired, candidate unique in each"
    ))
}

fn coset_counts() -> Outcome {
    let c = caps();
    let mut out = Vec::new();
    for (n, d, floor) in [(4, 1, 2u64), (6, 2, 20)] {
        let census = coset_census(n, d, &c).map_err(|e| e.to_string())?;
        ensure!(
            big(census.total() as usize) == factorial(n),
            "histogram sums to {}",
            census.total()
        );
        ensure!(
            census.max_count >= floor,
            "({n},{d}) max {} < {floor}",
            census.max_count
        );
        out.push(format!("({n},{d}) max {} >= {floor}", census.max_count));
    }
    Ok(out.join(", "))
}

fn consecutive_run(s: &[usize]) -> bool {
    let (mut lo, mut hi) = (s[0], s[0]);
    for &v in &s[1..] {
        if v + 1 == lo {
            lo = v;
        } else if v == hi + 1 {
            hi = v;
        } else {
            return false;
        }
    }
    true
}

fn media_and_ball_counts() -> Outcome {
    let c = caps();
    for n in 3..=12 {
        let got = MediaSetSpec::new(n).unwrap().count();
        ensure!(got == (big(1) << n) - 2u32, "media count at n={n} is {got}");
    }
    for n in 3..=7 {
        let all = sn(n);
        let brute = all.iter().filter(|p| {
            let s = p.symbols();
            let rev: Vec<usize> = s.iter().rev().copied().collect();
            consecutive_run(s) || consecutive_run(&rev)
        });
        let set = MediaSetSpec::new(n).unwrap().generate(&c).unwrap();
        let index = set.index();
        let brute: Vec<&Permutation> = brute.collect();
        ensure!(
            brute.len() == set.len() && brute.iter().all(|p| index.contains(p)),
            "media set differs at n={n}"
        );
    }
    for n in 1..=8 {
        let all = sn(n);
        for r in 0..=3usize.min(n - 1) {
            let brute = all
                .iter()
                .filter(|p| {
                    p.symbols()
                        .iter()
                        .enumerate()
                        .all(|(i, &v)| i.abs_diff(v) <= r)
                })
                .count();
            let spec = InfBallSpec::new(n, r).unwrap();
            ensure!(
                spec.count() == brute as u128,
                "ball n={n} r={r}: {} vs {brute}",
                spec.count()
            );
            ensure!(
                spec.generate(&c).unwrap().len() == brute,
                "ball n={n} r={r}: generated size"
            );
        }
    }
    Ok("media 3..=12, ball n<=8 r<=3".into())
}

fn query_semantics() -> Outcome {
    let c = caps();
    let n = 10;
    let full = Scheme::from_construction(
        Construction::from_id(ConstructionId::Full, n, &c).unwrap(),
        &c,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(QUERY_SEED);
    for _ in 0..QUERY_SAMPLES {
        let mut s: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            s.swap(i, rng.gen_range(0..=i));
        }
        let p = Permutation::new(s).unwrap();
        let longest = p.longest_cycle();
        let mut nodes = NodeArray::store(&full, p.clone()).unwrap();
        for i in 0..n {
            let (sym, q) = nodes.q1(i).unwrap();
            ensure!(q == 1 && sym == p.get(i), "q1 at {i} of {p}");
            let (pos, q) = nodes.q2(i).unwrap();
            let cycle = p.cycle_containing(i).unwrap().len();
            ensure!(p.get(pos) == i, "q2({i}) wrong position for {p}");
            ensure!(
                q == cycle && q <= longest,
                "q2({i}) took {q}, cycle {cycle}, longest {longest}"
            );
        }
    }
    for h in [2, 5] {
        let spec = BlockConcatSpec::new(n, h).unwrap();
        let scheme = Scheme::from_construction(Construction::BlockConcat(spec), &c).unwrap();
        for m in spec.generate(&c).unwrap().members() {
            let mut nodes = NodeArray::store(&scheme, m.clone()).unwrap();
            for v in 0..n {
                let (pos, q) = nodes.q2_block_probe(v).unwrap();
                ensure!(
                    m.get(pos) == v && q <= n / h + h,
                    "block probe for {v} in {m}: {q} queries"
                );
            }
        }
    }
    Ok(format!(
        "{QUERY_SAMPLES} members at n={n}, block probe for h=2,5"
    ))
}

fn bound_consistency() -> Outcome {
    let c = caps();
    let mut sets = Vec::new();
    for (n, h) in [(4, 2), (6, 2), (6, 3), (8, 2), (8, 4)] {
        sets.push(BlockConcatSpec::new(n, h).unwrap().generate(&c).unwrap());
        sets.push(
            RangeRestrictedSpec::new(n, h)
                .unwrap()
                .generate(&c)
                .unwrap(),
        );
    }
    for n in 3..=8 {
        for r in 1..=2usize.min(n - 1) {
            sets.push(InfBallSpec::new(n, r).unwrap().generate(&c).unwrap());
        }
        sets.push(MediaSetSpec::new(n).unwrap().generate(&c).unwrap());
    }
    for n in [4, 6, 8] {
        for t in 1..=2 {
            sets.push(AtSpec::new(n, t).unwrap().generate(&c).unwrap());
        }
    }
    sets.push(extended(8, 6, 3, 2, &c).unwrap().generate(&c).unwrap());
    for s in &sets {
        let d = s.claimed_locality().unwrap().min(s.n() - 1);
        let rep = bounds(s.n(), d).unwrap().with_size(&big(s.len()));
        ensure!(
            &big(s.len()) <= rep.best_upper(),
            "{} n={}: {} above bound",
            s.construction(),
            s.n(),
            s.len()
        );
        ensure!(rep.rate_of.unwrap() <= 1.0 + RATE_TOL, "rate above 1");
    }
    let inner = BlockConcatSpec::new(10, 2).unwrap().count();
    ensure!(
        inner == double_factorial(10),
        "block_concat(10,2) is not 10!!"
    );
    let t16 = enumerate_pp(&FieldSpec::new(4).unwrap(), 4, PpMode::Normalized, &c)
        .unwrap()
        .len();
    let ext = &inner * big(t16);
    let dd = double_factorial(16);
    ensure!(ext > dd, "{ext} <= 16!! = {dd}");
    Ok(format!(
        "{} sets within bounds; n=16: {ext} > 16!! = {dd}",
        sets.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("block concatenation is optimal at n=4", tightness_at_four),
        ("block and range-restricted sizes", size_formulas),
        ("generic locality certification", locality_certification),
        ("permutation polynomial counts", polynomial_counts),
        ("replacement map golden example", replacement_example),
        ("extended set repair accounting", extended_repair),
        (
            "pair assignment and A_1 = block concatenation",
            pair_assignment,
        ),
        ("window repair for A_t", window_repair),
        ("parity coset census", coset_counts),
        ("media set and ball counts", media_and_ball_counts),
        ("query semantics", query_semantics),
        ("bound consistency", bound_consistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
