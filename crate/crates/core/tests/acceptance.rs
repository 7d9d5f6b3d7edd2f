//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! non-zero if any fails. All comparisons are exact; only wall-clock limits
//! are tolerances.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use jet_invariants::calculus::commutator_coefficient;
use jet_invariants::cli::parse::parse_expr;
use jet_invariants::invariants::{dimension_report, functional_independence, is_invariant, iterate_diff_op, Sampling};
use jet_invariants::{JetSpace, JetVar, LieAlgebraBasis, Rational, RationalExpr};

const SL2_TABLE_LIMIT: Duration = Duration::from_secs(5);
const SL3_TABLE_LIMIT: Duration = Duration::from_secs(60);
const CHECK_LIMIT: Duration = Duration::from_secs(1);
const SEARCH_LIMIT: Duration = Duration::from_secs(10);

const SCHWARZIAN: &str = "(2*u1*u3-3*u2^2)/(2*u1^4)";
const PRINTED_SCHWARZIAN: &str = "(2*u1*u3-3*u1^2)/(2*u1^4)";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Run {
    code: Option<i32>,
    stdout: String,
    elapsed: Duration,
}

fn jetinv(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_jetinv")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code(),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(run: &Run, limit: Duration) -> Result<(), String> {
    ensure(run.elapsed < limit, || format!("took {:?}, limit {:?}", run.elapsed, limit))
}

/// Columns `n dimJ q_n s h i j` of a `dims` text table.
fn columns(text: &str) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<i64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split_whitespace().map(|f| f.parse().unwrap_or(-1)).collect())
        .collect();
    (0..7).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

fn expr(text: &str, n: usize) -> RationalExpr {
    parse_expr(text, &JetSpace::new(1, 1, n)).expect("fixture parses")
}

fn dims_table(group: &str, s: &[i64], h: &[i64], i: &[i64], j: &[i64], limit: Duration) -> Outcome {
    let run = jetinv(&["dims", "--group", group, "--max-order", "10"]);
    ensure(run.code == Some(0), || format!("exit code {:?}", run.code))?;
    within(&run, limit)?;
    let cols = columns(&run.stdout);
    for (name, got, want) in [("s", &cols[3], s), ("h", &cols[4], h), ("i", &cols[5], i), ("j", &cols[6], j)] {
        ensure(got.as_slice() == want, || format!("{name} = {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{:?}", run.elapsed))
}

fn c1() -> Outcome {
    dims_table(
        "sl2",
        &[1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3],
        &[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        &[1, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9],
        &[1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
        SL2_TABLE_LIMIT,
    )
}

fn c2() -> Outcome {
    dims_table(
        "sl3",
        &[2, 3, 4, 5, 6, 7, 8, 8, 8, 8, 8],
        &[6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4],
        &[0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
        SL3_TABLE_LIMIT,
    )
}

fn c3() -> Outcome {
    let good = jetinv(&["check", "--group", "sl2", "--order", "3", "--invariant", SCHWARZIAN]);
    ensure(good.code == Some(0), || format!("corrected form: exit {:?}\n{}", good.code, good.stdout))?;
    within(&good, CHECK_LIMIT)?;
    let residuals = is_invariant(&LieAlgebraBasis::sl2(), 3, &expr(SCHWARZIAN, 3)).map_err(|e| e.to_string())?;
    ensure(residuals.residuals.len() == 3 && residuals.holds(), || "nonzero residual".into())?;
    let bad = jetinv(&["check", "--group", "sl2", "--order", "3", "--invariant", PRINTED_SCHWARZIAN]);
    ensure(bad.code == Some(1), || format!("printed form: exit {:?}", bad.code))?;
    within(&bad, CHECK_LIMIT)?;
    Ok(format!("{:?} + {:?}", good.elapsed, bad.elapsed))
}

fn c4() -> Outcome {
    let sl2 = LieAlgebraBasis::sl2();
    let v2 = sl2.generators()[1].prolong(8);
    let v3 = sl2.generators()[2].prolong(8);
    let x = RationalExpr::var(JetVar::x());
    let int = |k: i64| Rational::from_integer(k.into());
    for n in 1..=8u32 {
        let k = n as i64;
        let un = RationalExpr::var(JetVar::u(n));
        let unm1 = RationalExpr::var(JetVar::u(n - 1));
        let got2 = v2.coefficient(&JetVar::u(n)).map_err(|e| e.to_string())?;
        ensure(got2.equals(&un.scale(&int(-k))), || format!("v2 at u{n}: {got2}"))?;
        let want3 = -(&unm1.scale(&int(k * (k - 1))) + &(&x * &un).scale(&int(2 * k)));
        let got3 = v3.coefficient(&JetVar::u(n)).map_err(|e| e.to_string())?;
        ensure(got3.equals(&want3), || format!("v3 at u{n}: {got3}"))?;
    }
    Ok("n = 1..8".into())
}

fn c5() -> Outcome {
    let mut count = 0;
    for basis in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
        for (k, g) in basis.generators().iter().enumerate() {
            let (a, b) = (g.prolong(6), g.prolong_recursive(6));
            for var in a.space().vars() {
                let (ca, cb) = (a.coefficient(&var).map_err(|e| e.to_string())?, b.coefficient(&var).map_err(|e| e.to_string())?);
                ensure(ca.equals(&cb), || format!("{} v{} at {var}", basis.name(), k + 1))?;
            }
            count += 1;
        }
    }
    ensure(count == 11, || format!("{count} generators"))?;
    Ok("11 generators, n <= 6".into())
}

fn c6() -> Outcome {
    let mut pairs = 0;
    for basis in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
        let gens = basis.generators();
        let lifted = basis.prolong(4).map_err(|e| e.to_string())?;
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                let lhs = gens[a].bracket(&gens[b]).map_err(|e| e.to_string())?.prolong(4);
                for var in lhs.space().vars() {
                    let l = lhs.coefficient(&var).map_err(|e| e.to_string())?;
                    let r = commutator_coefficient(&lifted[a], &lifted[b], &var).map_err(|e| e.to_string())?;
                    ensure(l.equals(&r), || format!("{} [v{}, v{}] at {var}", basis.name(), a + 1, b + 1))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn c7() -> Outcome {
    let sl2 = LieAlgebraBasis::sl2();
    let (i, j) = (expr("u", 0), expr(SCHWARZIAN, 3));
    let derived = iterate_diff_op(&i, &j, 2).map_err(|e| e.to_string())?;
    for (e, n) in derived.iter().zip([4usize, 5]) {
        let verdict = is_invariant(&sl2, n, e).map_err(|e| e.to_string())?;
        ensure(verdict.holds(), || format!("D^{} J not invariant", n - 3))?;
    }
    let system = [i, j, derived[0].clone(), derived[1].clone()];
    let rank = functional_independence(&system, &JetSpace::new(1, 1, 5), &Sampling::default()).map_err(|e| e.to_string())?;
    let i5 = dimension_report(&sl2, 5, &Sampling::default()).map_err(|e| e.to_string())?.rows[5].i;
    ensure(rank == 4 && i5 == 4, || format!("rank {rank}, i_5 {i5}"))?;
    Ok("rank 4 = i_5".into())
}

fn c8() -> Outcome {
    let run = jetinv(&["search", "--group", "sl2", "--order", "3", "--denom", "u1^4", "--max-degree", "2"]);
    ensure(run.code == Some(0), || format!("exit {:?}", run.code))?;
    within(&run, SEARCH_LIMIT)?;
    let lines: Vec<&str> = run.stdout.lines().collect();
    ensure(lines.len() == 1, || format!("expected one invariant:\n{}", run.stdout))?;
    let found = lines[0].split_once(" = ").and_then(|(_, rest)| rest.split("    [").next()).unwrap_or("");
    let found = expr(found, 3);
    let target = expr(SCHWARZIAN, 3);
    let ratio = found.div(&target).map_err(|e| e.to_string())?;
    let scalar = ratio.numerator().leading_coefficient() / ratio.denominator().leading_coefficient();
    ensure(ratio.equals(&RationalExpr::constant(scalar)), || format!("{found} is not a multiple"))?;

    let low = jetinv(&["search", "--group", "sl2", "--order", "2", "--max-degree", "2"]);
    ensure(low.code == Some(0), || format!("order 2: exit {:?}", low.code))?;
    within(&low, SEARCH_LIMIT)?;
    let space = JetSpace::new(1, 1, 2);
    let mut found = Vec::new();
    for line in low.stdout.lines() {
        let text = line.split_once(" = ").and_then(|(_, rest)| rest.split("    [").next()).unwrap_or("");
        let e = parse_expr(text, &space).map_err(|e| e.to_string())?;
        ensure(e.vars().iter().all(|v| *v == JetVar::u(0)), || format!("{line} is not a function of u"))?;
        found.push(e);
    }
    let rank = functional_independence(&found, &space, &Sampling::default()).map_err(|e| e.to_string())?;
    ensure(rank == 1, || format!("order-2 invariants have rank {rank}"))?;
    Ok(format!("{:?} + {:?}", run.elapsed, low.elapsed))
}

fn c9() -> Outcome {
    for basis in [LieAlgebraBasis::sl2(), LieAlgebraBasis::sl3()] {
        let r = basis.group_dim();
        let report = dimension_report(&basis, 10, &Sampling::default()).map_err(|e| e.to_string())?;
        ensure(report.flags.is_empty(), || format!("{} flagged: {:?}", basis.name(), report.flags))?;
        for w in report.rows.windows(2) {
            let (prev, row) = (&w[0], &w[1]);
            let qn = row.q_n.unwrap_or(0);
            ensure(prev.i <= row.i && row.i <= prev.i + qn, || format!("{} i at n={}", basis.name(), row.n))?;
            ensure(prev.s <= row.s && row.s <= r.min(prev.s + qn), || format!("{} s at n={}", basis.name(), row.n))?;
        }
    }
    Ok("sl2, sl3 up to n = 10".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("C1 sl2 dimension table", c1),
        ("C2 sl3 dimension table", c2),
        ("C3 third-order sl2 invariant", c3),
        ("C4 closed-form coefficients", c4),
        ("C5 oracle equivalence", c5),
        ("C6 bracket homomorphism", c6),
        ("C7 invariant differential operator", c7),
        ("C8 ansatz search", c8),
        ("C9 inequality audit", c9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name} ({detail})"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
