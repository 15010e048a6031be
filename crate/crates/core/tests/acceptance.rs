//! Acceptance suite: one PASS/FAIL line per criterion. All checks are exact
//! (zero tolerance); the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use commperm::bijection::{verify_cardinality, verify_round_trip};
use commperm::check::CheckReport;
use commperm::conjecture::{logconcavity_sweep, proposition_check, scalar_inequality};
use commperm::counting::{
    a_count_composition, a_transitive, composition_row, factorial, reduction_rhs, stirling_first_triangle,
    CountTable,
};
use commperm::numtheory::{b_dirichlet, b_flag_sum, b_multiplicative, divisor_sum};
use commperm::oracle::histogram;
use commperm::series::{partition_counts, shift_check, verify_bryan_fulman};
use num_bigint::BigUint;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn report(r: CheckReport) -> Outcome {
    if r.passed() {
        Ok(format!("{} comparisons", r.checked))
    } else {
        Err(r.to_string())
    }
}

fn merged(name: &str, parts: impl IntoIterator<Item = commperm::Result<CheckReport>>) -> Outcome {
    let mut all = CheckReport::new(name);
    for part in parts {
        all.absorb(part.map_err(|e| e.to_string())?);
    }
    report(all)
}

fn big(v: &[u32]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn oracle_equivalence() -> Outcome {
    let table = CountTable::build_for(&[1, 2, 3], 6).map_err(|e| e.to_string())?;
    let mut all = CheckReport::new("oracle");
    for p in 1..=3u32 {
        for n in 1..=6 {
            let h = histogram(p as usize, n).map_err(|e| e.to_string())?;
            for k in 0..=n {
                all.compare(|| format!("p={} n={} k={}", p, n, k), &h.count(k), &table.a(p, n, k).unwrap());
            }
        }
    }
    for (p, anchor) in [(2u32, big(&[8, 9, 1])), (3, big(&[26, 21, 1]))] {
        let h = histogram(p as usize, 3).map_err(|e| e.to_string())?;
        let got: Vec<BigUint> = (1..=3).map(|k| h.count(k)).collect();
        if got != anchor {
            all.fail(format!("anchor p={} n=3", p), format!("{:?}", got), format!("{:?}", anchor));
        }
    }
    report(all)
}

fn route_agreement() -> Outcome {
    let table = CountTable::build(4, 25).map_err(|e| e.to_string())?;
    let mut all = CheckReport::new("routes");
    for p in 0..=4u32 {
        for n in 0..=25 {
            let comp = composition_row(p, n).map_err(|e| e.to_string())?;
            let row = table.row(p, n).unwrap();
            for k in 0..=n {
                all.compare(|| format!("p={} n={} k={}", p, n, k), &row[k], &comp[k]);
            }
        }
    }
    // the single-value entry point goes through the same memo
    all.compare(
        || "p=3 n=25 k=7".into(),
        &a_count_composition(3, 25, 7).map_err(|e| e.to_string())?,
        &table.a(3, 25, 7).unwrap(),
    );
    report(all)
}

fn stirling() -> Outcome {
    let table = CountTable::build_for(&[1], 30).map_err(|e| e.to_string())?;
    let tri = stirling_first_triangle(30);
    let mut all = CheckReport::new("stirling");
    for n in 0..=30 {
        for k in 0..=n {
            all.compare(|| format!("n={} k={}", n, k), &table.a(1, n, k).unwrap(), &tri[n][k]);
        }
    }
    report(all)
}

fn b_agreement() -> Outcome {
    let mut all = CheckReport::new("b routes");
    for p in 0..=6u32 {
        for n in 1..=2000u64 {
            let flag = b_flag_sum(p, n).map_err(|e| e.to_string())?;
            let mult = b_multiplicative(p, n).map_err(|e| e.to_string())?;
            let dir = b_dirichlet(p, n).map_err(|e| e.to_string())?;
            all.compare(|| format!("multiplicative p={} n={}", p, n), &mult, &flag);
            all.compare(|| format!("dirichlet p={} n={}", p, n), &dir, &flag);
        }
    }
    for n in 1..=2000u64 {
        all.compare(
            || format!("sigma n={}", n),
            &b_flag_sum(2, n).map_err(|e| e.to_string())?,
            &divisor_sum(n).map_err(|e| e.to_string())?,
        );
    }
    report(all)
}

fn reduction() -> Outcome {
    let mut all = CheckReport::new("reduction");
    for p in 0..=4u32 {
        for n in 1..=40 {
            let lhs = a_transitive(p + 1, n).map_err(|e| e.to_string())?;
            let rhs = reduction_rhs(p, n).map_err(|e| e.to_string())?;
            all.compare(|| format!("p={} n={}", p, n), &lhs, &rhs);
        }
    }
    report(all)
}

fn bijection() -> Outcome {
    let mut all = CheckReport::new("bijection");
    for n in 1..=6 {
        all.absorb(verify_round_trip(1, n).map_err(|e| e.to_string())?);
    }
    for n in 1..=5 {
        all.absorb(verify_round_trip(2, n).map_err(|e| e.to_string())?);
    }
    for (p, n_max) in [(1usize, 6usize), (2, 5)] {
        for n in 1..=n_max {
            let card = verify_cardinality(p, n).map_err(|e| e.to_string())?;
            all.absorb(card.check);
        }
    }
    report(all)
}

fn product_identity() -> Outcome {
    merged("product", (1..=4).map(|p| verify_bryan_fulman(p, 20)))
}

fn hook_shift() -> Outcome {
    shift_check(24).map_err(|e| e.to_string()).and_then(report)
}

fn pair_total() -> Outcome {
    let table = CountTable::build_for(&[2], 40).map_err(|e| e.to_string())?;
    let parts = partition_counts(40);
    let mut all = CheckReport::new("pairs");
    for n in 0..=40 {
        all.compare(
            || format!("n={}", n),
            &table.total(2, n).unwrap(),
            &(&parts[n] * factorial(n)),
        );
    }
    report(all)
}

fn sweeps() -> Outcome {
    let mut lines = Vec::new();
    for (p, n_max) in [(3u32, 100usize), (4, 100), (5, 100), (2, 500)] {
        let r = logconcavity_sweep(p, n_max).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("p={} n<={}: violations {:?}", p, n_max, r.violations));
        }
        lines.push(format!("p={} n<={} 0 violations {}ms", p, n_max, r.wall_time_ms));
    }
    Ok(lines.join("; "))
}

fn proposition() -> Outcome {
    let r = proposition_check(5, 30).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{:?}", r.failures));
    }
    if let Some(p) = (2..=60).find(|&p| !scalar_inequality(p)) {
        return Err(format!("scalar inequality fails at p={}", p));
    }
    Ok(format!("{} checks, scalar inequality 2<=p<=60", r.checked))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence p<=3 n<=6", oracle_equivalence),
        ("recurrence = composition route p<=4 n<=25", route_agreement),
        ("p=1 rows are Stirling numbers n<=30", stirling),
        ("B routes agree n<=2000 p<=6, B(2,n)=sigma(n)", b_agreement),
        ("transitive reduction p<=4 n<=40", reduction),
        ("bijection round trip and witness cardinality", bijection),
        ("product identity p<=4 order 20", product_identity),
        ("hook-length shift n<=24", hook_shift),
        ("commuting pairs total n<=40", pair_total),
        ("log-concavity sweeps", sweeps),
        ("k=n-1 proposition p<=5 n<=30", proposition),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {} [{}] ({:.1}s)", i + 1, name, detail, secs),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {} [{}] ({:.1}s)", i + 1, name, why, secs);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
