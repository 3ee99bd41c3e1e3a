//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::One;
use polyassoc::assoc::{compose_closed_form, compose_substitution};
use polyassoc::classify::{verify_condpol, SymmetricCoeffs};
use polyassoc::oracle::{assoc_pointwise, assoc_pointwise_detailed, Strategy};
use polyassoc::ring::roots_of_unity;
use polyassoc::sampling::Sampler;
use polyassoc::structure::{
    group_status, is_medial, reducibility, skew_is_endomorphism, verify_skew, BinaryOp,
    MedialMethod, Reducibility,
};
use polyassoc::{
    classify, enumerate_associative, is_associative, parse_poly, reconstruct, BigInt, BigRational,
    Classification, EnumerationConfig, GaussianInteger, GaussianRational, MultilinearPoly,
    OracleConfig, Scalar, SparsePoly,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

const WORKED: &str = "9*x1*x2*x3 + 3*(x1*x2 + x2*x3 + x3*x1) + x1 + x2 + x3";

fn z(v: i64) -> BigInt {
    BigInt::from(v)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(z(n), z(d))
}

fn gi(re: i64, im: i64) -> GaussianInteger {
    GaussianInteger::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn worked_example() -> Outcome {
    let p = parse_poly::<BigInt>(WORKED, 3).map_err(err)?;
    let cls = classify(&p).map_err(err)?;
    let expected = Classification::ShiftedProduct {
        a: z(9),
        b: q(1, 3),
    };
    ensure(cls == expected, || format!("got {cls:?}"))?;
    Ok("type (vi), a = 9, b = 1/3".into())
}

fn round_trip<R: Scalar>(src: &str, n: usize, omega: R) -> Result<(), String> {
    let p = parse_poly::<R>(src, n).map_err(err)?;
    let cls = classify(&p).map_err(err)?;
    let expected = Classification::TwistedSum(omega);
    ensure(cls == expected, || format!("{src}: got {cls:?}"))?;
    let back = reconstruct(&cls, n).map_err(err)?;
    ensure(back == p, || format!("{src}: reconstructed {back}"))?;
    let again = classify(&back).map_err(err)?;
    ensure(again == cls, || format!("{src}: reclassified as {again:?}"))
}

fn twisted_sums() -> Outcome {
    for (label, f) in [
        (
            "Z",
            Box::new(|| round_trip::<BigInt>("x1 - x2 + x3", 3, z(-1)))
                as Box<dyn Fn() -> Result<(), String>>,
        ),
        (
            "Z[i]",
            Box::new(|| {
                round_trip::<GaussianInteger>("x1 + i*x2 - x3 - i*x4 + x5", 5, GaussianInteger::i())
            }),
        ),
    ] {
        let t = Instant::now();
        f()?;
        ensure(t.elapsed() < Duration::from_secs(1), || {
            format!("{label} case took {:?}", t.elapsed())
        })?;
    }
    Ok("omega = -1 over Z and omega = i over Z[i], both round-trip".into())
}

fn compositions_agree<R: Scalar>(m: &MultilinearPoly<R>) -> Result<bool, String> {
    let p = m.to_sparse();
    for slot in 1..=m.arity() {
        let closed = compose_closed_form(m, slot).map_err(err)?.to_sparse();
        if closed != compose_substitution(&p, slot).map_err(err)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dual_path() -> Outcome {
    let values = [z(-1), z(0), z(1)];
    let mut checked = 0;
    for t in 0..81usize {
        let table: Vec<BigInt> = (0..4)
            .map(|k| values[(t / 3usize.pow(3 - k)) % 3].clone())
            .collect();
        let m = MultilinearPoly::from_table(2, &table).map_err(err)?;
        ensure(compositions_agree(&m)?, || {
            format!("mismatch on {}", m.to_sparse())
        })?;
        checked += 1;
    }
    let mut sampler = Sampler::new(2024, 3);
    for n in [3, 4] {
        for _ in 0..1000 {
            let m = sampler.multilinear::<BigInt>(n).map_err(err)?;
            ensure(compositions_agree(&m)?, || {
                format!("mismatch on {}", m.to_sparse())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tables, zero mismatches"))
}

fn census() -> Outcome {
    let mut summary = Vec::new();
    for (n, bound, expected_total) in [(2usize, 2u32, 625u128), (3, 1, 6561)] {
        let mut cfg = EnumerationConfig::new(n, bound);
        cfg.strategy = Strategy::Exhaustive;
        let rep = enumerate_associative::<BigInt>(&cfg).map_err(err)?;
        ensure(
            rep.total == expected_total && rep.examined == expected_total,
            || format!("n={n}: {} of {} examined", rep.examined, rep.total),
        )?;
        ensure(rep.oracle_discrepancies.is_empty(), || {
            format!("n={n}: {:?}", rep.oracle_discrepancies)
        })?;
        ensure(rep.dual_path_mismatches.is_empty(), || {
            format!("n={n}: {:?}", rep.dual_path_mismatches)
        })?;
        ensure(rep.unclassified.is_empty(), || {
            format!("n={n}: unclassified {:?}", rep.unclassified)
        })?;
        ensure(rep.double_classified.is_empty(), || {
            format!("n={n}: double {:?}", rep.double_classified)
        })?;
        ensure(rep.spot_failures.is_empty(), || {
            format!("n={n}: {:?}", rep.spot_failures)
        })?;
        let twisted: Vec<_> = rep
            .census
            .iter()
            .filter(|r| r.tag == "twisted-sum")
            .collect();
        if n == 2 {
            ensure(twisted.is_empty(), || "type (v) row at n=2".into())?;
        } else {
            ensure(
                twisted.len() == 1 && twisted[0].params == "omega=-1",
                || format!("twisted rows {twisted:?}"),
            )?;
        }
        summary.push(format!(
            "n={n}: {} associative of {}",
            rep.associative.len(),
            rep.total
        ));
    }
    Ok(summary.join("; "))
}

fn condpol() -> Outcome {
    let mut agree = 0;
    for t in 0..625usize {
        let c: Vec<BigInt> = (0..4)
            .map(|k| z((t / 5usize.pow(k)) as i64 % 5 - 2))
            .collect();
        let sym = SymmetricCoeffs::new(c);
        let p = sym.to_multilinear().map_err(err)?.to_sparse();
        let a = is_associative(&p).map_err(err)?.is_associative();
        ensure(verify_condpol(&sym) == a, || format!("discrepancy on {p}"))?;
        agree += 1;
    }
    Ok(format!("{agree} symmetric tables agree"))
}

fn skew_checks<R: Scalar>(cls: &Classification<R>, n: usize) -> Result<(), String> {
    let p = reconstruct(cls, n).map_err(err)?;
    let g = group_status(cls, n).map_err(err)?;
    let s = g.skew.ok_or_else(|| format!("{cls:?}: no skew"))?;
    ensure(verify_skew(&p, &s).map_err(err)?, || {
        format!("{p}: skew {s} fails")
    })?;
    ensure(skew_is_endomorphism(&p, &s).map_err(err)?, || {
        format!("{p}: skew {s} not an endomorphism")
    })
}

fn medial_symbolic<R: Scalar>(cls: &Classification<R>, n: usize) -> Result<bool, String> {
    let Ok(p) = reconstruct(cls, n) else {
        return Ok(false);
    };
    let (m, method) = is_medial(&p).map_err(err)?;
    ensure(m && method == MedialMethod::Symbolic, || {
        format!("{p}: medial {m} via {method:?}")
    })?;
    Ok(true)
}

fn structure_suite() -> Outcome {
    let mut skews = 0;
    for n in 2..=5 {
        for c in -3..=3 {
            skew_checks(&Classification::TranslatedSum(z(c)), n)?;
            skews += 1;
        }
    }
    for n in 3..=5 {
        for w in roots_of_unity::<BigInt>((n - 1) as u32)
            .into_iter()
            .filter(|w| !w.is_one())
        {
            skew_checks(&Classification::TwistedSum(w), n)?;
            skews += 1;
        }
        for w in roots_of_unity::<GaussianInteger>((n - 1) as u32)
            .into_iter()
            .filter(|w| !w.is_one())
        {
            skew_checks(&Classification::TwistedSum(w), n)?;
            skews += 1;
        }
    }
    let mut medial = 0;
    for n in 2..=3 {
        let mut int_cases: Vec<Classification<BigInt>> = vec![
            Classification::LeftProjection,
            Classification::RightProjection,
        ];
        for c in -2..=2 {
            int_cases.push(Classification::Constant(z(c)));
            int_cases.push(Classification::TranslatedSum(z(c)));
        }
        if n == 3 {
            int_cases.push(Classification::TwistedSum(z(-1)));
        }
        for a in [-2, -1, 1, 2, 9] {
            for (bn, bd) in [(0, 1), (1, 1), (-1, 1), (1, 3), (1, 2)] {
                int_cases.push(Classification::ShiftedProduct {
                    a: z(a),
                    b: q(bn, bd),
                });
            }
        }
        for cls in &int_cases {
            medial += usize::from(medial_symbolic(cls, n)?);
        }
        let rat = Classification::ShiftedProduct {
            a: q(-2, 3),
            b: q(5, 7),
        };
        medial += usize::from(medial_symbolic(&rat, n)?);
        let gauss = Classification::ShiftedProduct {
            a: gi(1, 1),
            b: GaussianRational::from_integer(gi(0, 1)),
        };
        medial += usize::from(medial_symbolic(&gauss, n)?);
    }
    Ok(format!(
        "{skews} skew/endomorphism identities, {medial} symbolic mediality checks"
    ))
}

fn iterate_matches<R: Scalar>(op: &BinaryOp<R>, p: &SparsePoly<R>, n: usize) -> Result<(), String> {
    let it = op.iterate(n).map_err(err)?;
    ensure(&it == p, || {
        format!("iterate of {op} is {it}, expected {p}")
    })
}

fn reducibility_suite() -> Outcome {
    let c4 = Classification::TranslatedSum(z(4));
    match reducibility(&c4, 3).map_err(err)? {
        Reducibility::Reducible {
            op: op @ BinaryOp::ShiftedSum(_),
            alternatives,
        } if alternatives.is_empty() => {
            ensure(op == BinaryOp::ShiftedSum(z(2)), || {
                format!("c0 from {op:?}")
            })?;
            iterate_matches(&op, &reconstruct(&c4, 3).map_err(err)?, 3)?;
        }
        other => return Err(format!("c = 4: {other:?}")),
    }
    let c1 = reducibility(&Classification::TranslatedSum(z(1)), 3).map_err(err)?;
    ensure(c1 == Reducibility::Irreducible, || format!("c = 1: {c1:?}"))?;
    for n in 3..=5 {
        for w in roots_of_unity::<GaussianInteger>((n - 1) as u32)
            .into_iter()
            .filter(|w| !w.is_one())
        {
            let r = reducibility(&Classification::TwistedSum(w), n).map_err(err)?;
            ensure(r == Reducibility::Irreducible, || {
                format!("twisted n={n}: {r:?}")
            })?;
        }
    }
    for n in [3, 5] {
        let r = reducibility(&Classification::TwistedSum(z(-1)), n).map_err(err)?;
        ensure(r == Reducibility::Irreducible, || {
            format!("twisted over Z, n={n}: {r:?}")
        })?;
    }
    let prod = Classification::ShiftedProduct {
        a: q(4, 1),
        b: q(0, 1),
    };
    match reducibility(&prod, 3).map_err(err)? {
        Reducibility::Reducible { op, alternatives } => {
            ensure(op == BinaryOp::ScaledProduct(q(2, 1)), || {
                format!("a0 from {op:?}")
            })?;
            ensure(
                alternatives == vec![BinaryOp::ScaledProduct(q(-2, 1))],
                || format!("{alternatives:?}"),
            )?;
            let p = reconstruct(&prod, 3).map_err(err)?;
            iterate_matches(&op, &p, 3)?;
            iterate_matches(&alternatives[0], &p, 3)?;
        }
        other => return Err(format!("a = 4: {other:?}")),
    }
    Ok("c=4 -> c0=2, c=1 irreducible, twisted irreducible, a=4 -> a0=+-2".into())
}

fn negative_path() -> Outcome {
    let p = parse_poly::<BigInt>("2*x1*x2 + x1", 2).map_err(err)?;
    let verdict = is_associative(&p).map_err(err)?;
    let w = verdict.witness().ok_or("no witness")?;
    ensure(w.slot == 2 && w.subset() == Some(0b101), || {
        format!("witness {w:?}")
    })?;
    let f = assoc_pointwise_detailed(&p, &OracleConfig::grid())
        .map_err(err)?
        .ok_or("oracle passes")?;
    ensure(f.point == vec![z(1), z(0), z(1)], || {
        format!("point {:?}", f.point)
    })?;
    ensure(f.first == z(3) && f.other == z(1), || {
        format!("{} vs {}", f.first, f.other)
    })?;
    ensure(
        !assoc_pointwise(&p, &OracleConfig::grid()).map_err(err)?,
        || "grid passes".into(),
    )?;
    Ok("witness (2, {1,3}); p(1,0,1): 3 vs 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked example", worked_example, Duration::from_secs(1)),
        ("twisted sums", twisted_sums, Duration::from_secs(2)),
        ("dual-path composition", dual_path, Duration::from_secs(30)),
        ("census", census, Duration::from_secs(60)),
        ("condpol equivalence", condpol, Duration::from_secs(10)),
        ("structure suite", structure_suite, Duration::from_secs(30)),
        ("reducibility", reducibility_suite, Duration::from_secs(30)),
        ("negative path", negative_path, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!(
                "{detail}, but took {elapsed:.2?} (limit {limit:?})"
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({elapsed:.2?})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
