//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p bdl-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use bdl_core::bdl::{fk_parikh, fk_word, scan_normal, FK_FUNCTIONAL};
use bdl_core::fixedpoint::is_prefix_of_fixed_point;
use bdl_core::fixtures;
use bdl_core::linalg::integer_form;
use bdl_core::morphimage::image_of_fixed_point;
use bdl_core::spectral::RootOrigin;
use bdl_core::{
    candidate_normal_space, char_poly, classify, eigen_classify, fk_build, generate_window,
    image_normal_constraints, parikh, scan_boundedness, FiniteWord, GeometricRepresentation,
    IntMatrix, ModulusClass, Normal, ParikhVector, ScanVerdict, Substitution, VerdictKind,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(
        elapsed < limit,
        format!("took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = fixtures::counterexample_substitution();
    let report = eigen_classify(s.incidence(), TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let r10 = 10f64.sqrt();
    let moduli = report.moduli();
    check(moduli.len() == 3, format!("expected 3 roots, got {moduli:?}"))?;
    check(
        (moduli[0] - (2.0 + r10)).abs() < TOL && (moduli[1] - (r10 - 2.0)).abs() < TOL,
        format!("moduli {moduli:?}"),
    )?;
    let minus_one = &report.eigen_classes[2];
    check(
        minus_one.modulus_class == ModulusClass::Eq1Certified
            && minus_one.origin == RootOrigin::Integer(BigInt::from(-1)),
        format!("third root {minus_one:?}"),
    )?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "moduli {:.12}, {:.12}, exact -1 EQ1_CERTIFIED in {elapsed:.2?}",
        moduli[0], moduli[1]
    ))
}

fn criterion_2() -> Outcome {
    let s = fixtures::counterexample_substitution();
    let space = candidate_normal_space(s.incidence(), TOL).map_err(|e| e.to_string())?;
    check(space.dim() == 1, format!("dimension {}", space.dim()))?;
    let want = big(&FK_FUNCTIONAL);
    let neg: Vec<BigInt> = want.iter().map(|x| -x).collect();
    let numeric = integer_form(&space.basis[0], 1e-6, 1000).ok_or("no integer form")?;
    check(
        numeric == want || numeric == neg,
        format!("numeric basis scales to {numeric:?}"),
    )?;
    let exact = space.exact_basis.ok_or("no exact basis")?;
    check(
        exact.len() == 1 && (exact[0] == want || exact[0] == neg),
        format!("exact basis {exact:?}"),
    )?;
    Ok("normal space spanned by (3,-1,0), numeric and exact".into())
}

fn criterion_3() -> Outcome {
    let s = fixtures::counterexample_substitution();
    let f = big(&FK_FUNCTIONAL);
    let m = s.incidence();
    for (letter, base) in [(0u16, 3i64), (1, -1), (2, 0)] {
        let mut v = ParikhVector::unit(3, letter);
        for n in 0..=8u32 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let got = v.dot(&f);
            check(
                got == BigInt::from(base * sign),
                format!("letter {letter}, n = {n}: got {got}"),
            )?;
            v = m.mul_vector(&v);
        }
    }
    // the same values from literal words for small n
    let mut words: Vec<FiniteWord> = "ABC"
        .chars()
        .map(|c| s.alphabet().parse_word(&c.to_string()).unwrap())
        .collect();
    for n in 0..=5 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        for (w, base) in words.iter().zip([3i64, -1, 0]) {
            check(
                parikh(w).dot(&f) == BigInt::from(base * sign),
                format!("expanded word at n = {n}"),
            )?;
        }
        words = words.iter().map(|w| s.apply(w).unwrap()).collect();
    }
    Ok("3(-1)^n, (-1)^(n+1), 0 for n = 0..8".into())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = fixtures::counterexample_substitution();
    let seed = s.seed(1, 'B', 'B').map_err(|e| e.to_string())?;
    for k in 0..=10 {
        let fk = fk_build(k, false).map_err(|e| e.to_string())?;
        check(
            fk.value == BigInt::from(k + 2),
            format!("k = {k}: value {}", fk.value),
        )?;
    }
    let f = big(&FK_FUNCTIONAL);
    for k in 0..=4 {
        let w = fk_word(k).map_err(|e| e.to_string())?;
        check(
            parikh(&w) == fk_parikh(k) && parikh(&w).dot(&f) == BigInt::from(k + 2),
            format!("k = {k}: expansion disagrees"),
        )?;
        if k <= 3 {
            let prefix = is_prefix_of_fixed_point(&s, &seed, &w).map_err(|e| e.to_string())?;
            check(prefix, format!("F_{k} is not a prefix"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("f·Ψ(F_k) = k+2 for k = 0..10, expansion k <= 4, prefix k <= 3, {elapsed:.2?}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let s = fixtures::counterexample_substitution();
    let seed = s.seed(1, 'B', 'B').map_err(|e| e.to_string())?;
    let out = scan_boundedness(&s, &Normal::from_i64s(&FK_FUNCTIONAL), 1_000_000, Some(&seed))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(out.is_exact(), "scan was not exact")?;
    check(
        out.verdict() == ScanVerdict::Growing,
        format!("verdict {:?}, blocks {:?}", out.verdict(), out.block_maxima_strings()),
    )?;
    check(out.max() >= 5.0, format!("max {}", out.max()))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "GROWING, max {} at n = {}, {elapsed:.2?}",
        out.max_string(),
        out.argmax()
    ))
}

fn criterion_6() -> Outcome {
    let s = fixtures::contracting_substitution();
    let verdict = classify(&s, TOL).map_err(|e| e.to_string())?;
    let moduli = verdict.spectrum.moduli();
    let want = [5.0593, 2.6549, 0.5956];
    check(
        moduli.len() == 3 && moduli.iter().zip(want).all(|(m, w)| (m - w).abs() < 1e-3),
        format!("moduli {moduli:?}"),
    )?;
    check(
        verdict.kind == VerdictKind::Guaranteed,
        format!("verdict {:?}", verdict.kind),
    )?;
    Ok(format!(
        "moduli {:.4}, {:.4}, {:.4}; GUARANTEED",
        moduli[0], moduli[1], moduli[2]
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let s = fixtures::contracting_substitution();
    let phi = fixtures::erasing_projection();
    let system = image_normal_constraints(&phi.incidence_matrix(), s.incidence(), TOL)
        .map_err(|e| e.to_string())?;
    check(
        system.rank == 2 && system.null_space.is_empty(),
        format!("rank {}, null space {:?}", system.rank, system.null_space),
    )?;
    let seed = s.default_seed().map_err(|e| e.to_string())?;
    let image = image_of_fixed_point(&s, &phi, &seed, 100_000).map_err(|e| e.to_string())?;
    let mut smallest = f64::INFINITY;
    let mut directions = 0;
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            if a == 0 && b == 0 {
                continue;
            }
            directions += 1;
            let out = scan_normal(image.image(), &Normal::from_i64s(&[a, b]))
                .map_err(|e| e.to_string())?;
            smallest = smallest.min(out.max());
        }
    }
    let elapsed = start.elapsed();
    check(directions == 120, format!("{directions} directions"))?;
    check(smallest >= 50.0, format!("some direction has max {smallest}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "rank 2, null space {{0}}; smallest grid max {smallest} over 120 directions, {elapsed:.2?}"
    ))
}

fn random_word(rng: &mut ChaCha8Rng, s: &Substitution, max_len: usize) -> FiniteWord {
    let len = rng.random_range(0..=max_len);
    let symbols = (0..len).map(|_| rng.random_range(0..s.dim()) as u16).collect();
    FiniteWord::new(s.alphabet().clone(), symbols).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let d = rng.random_range(1..=4);
    let rows: Vec<Vec<BigInt>> = (0..d)
        .map(|_| (0..d).map(|_| BigInt::from(rng.random_range(0..5))).collect())
        .collect();
    IntMatrix::from_rows(rows).unwrap()
}

fn rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(1..100)),
        BigInt::from(rng.random_range(1..20)),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut windows = 0;
    for (name, s) in fixtures::all_substitutions() {
        // Ψ(ψ(w)) = M Ψ(w)
        for _ in 0..100 {
            let w = random_word(&mut rng, &s, 40);
            let image = s.apply(&w).map_err(|e| e.to_string())?;
            check(
                parikh(&image) == s.incidence().mul_vector(&parikh(&w)),
                format!("{name}: abelianization fails"),
            )?;
        }
        let seed = s.default_seed().map_err(|e| e.to_string())?;
        for _ in 0..5 {
            windows += 1;
            let n_left = rng.random_range(1..400);
            let n_right = rng.random_range(1..400);
            let window = generate_window(&s, &seed, n_left, n_right).map_err(|e| e.to_string())?;
            let word = window.word();
            let path = word.parikh_path();

            // telescoping: Ψ_{n+1} − Ψ_n = e_{u_n}
            for n in word.index_range() {
                let step: Vec<i64> = path
                    .get(n + 1)
                    .unwrap()
                    .iter()
                    .zip(path.get(n).unwrap())
                    .map(|(a, b)| a - b)
                    .collect();
                let mut unit = vec![0; s.dim()];
                unit[word.letter(n).unwrap() as usize] = 1;
                check(step == unit, format!("{name}: telescoping fails at n = {n}"))?;
            }

            // exact representation with random lengths and η
            let lengths: Vec<BigRational> = (0..s.dim()).map(|_| rational(&mut rng)).collect();
            let eta = rational(&mut rng);
            let rep = GeometricRepresentation::from_lengths(lengths.clone(), eta, &path)
                .map_err(|e| e.to_string())?;
            let shifted = rep.shifted_lengths();
            for (n, psi) in path.iter() {
                let rhs = shifted
                    .iter()
                    .zip(psi)
                    .fold(BigRational::zero(), |acc, (l, &c)| {
                        acc + l * BigRational::from_integer(BigInt::from(c))
                    })
                    .abs();
                check(
                    rep.deviation(n).unwrap() == rhs,
                    format!("{name}: deviation identity fails at n = {n}"),
                )?;
            }
            let mut seen: Vec<Option<BigRational>> = vec![None; s.dim()];
            for n in word.index_range() {
                let letter = word.letter(n).unwrap() as usize;
                let gap = rep.gap(n).unwrap();
                match &seen[letter] {
                    Some(g) => check(*g == gap, format!("{name}: unequal gaps for one letter"))?,
                    None => seen[letter] = Some(gap.clone()),
                }
                check(gap == lengths[letter], format!("{name}: gap is not the letter length"))?;
            }
        }
        let cp = char_poly(s.incidence()).map_err(|e| e.to_string())?;
        check(cp.cayley_hamilton_holds(s.incidence()), format!("{name}: Cayley–Hamilton"))?;
    }
    for i in 0..100 {
        let m = random_matrix(&mut rng);
        let cp = char_poly(&m).map_err(|e| e.to_string())?;
        check(cp.cayley_hamilton_holds(&m), format!("random matrix {i}: Cayley–Hamilton"))?;
    }
    Ok(format!(
        "telescoping, abelianization (100 words/fixture), deviation identity and gap law on {windows} windows, Cayley–Hamilton on fixtures + 100 matrices"
    ))
}

fn criterion_9() -> Outcome {
    let tm = fixtures::thue_morse();
    let out = scan_boundedness(&tm, &Normal::from_i64s(&[1, -1]), 100_000, None)
        .map_err(|e| e.to_string())?;
    check(
        out.is_exact() && out.max_string() == "1" && out.verdict() == ScanVerdict::BoundedSoFar,
        format!("Thue–Morse max {}, verdict {:?}", out.max_string(), out.verdict()),
    )?;

    let fib = fixtures::fibonacci();
    let seed = fib.default_seed().map_err(|e| e.to_string())?;
    check(seed.power == 2, format!("Fibonacci seed power {}", seed.power))?;
    generate_window(&fib, &seed, 1000, 1000).map_err(|e| e.to_string())?;
    let verdict = classify(&fib, TOL).map_err(|e| e.to_string())?;
    let moduli = verdict.spectrum.moduli();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    check(
        verdict.kind == VerdictKind::Guaranteed,
        format!("Fibonacci verdict {:?}", verdict.kind),
    )?;
    check(
        (moduli[1] - inv_phi).abs() < TOL && moduli[1] < 1.0,
        format!("Fibonacci second modulus {}", moduli[1]),
    )?;
    Ok(format!(
        "Thue–Morse max 1 BOUNDED_SO_FAR; Fibonacci (ψ² seed) GUARANTEED, |λ₂| = {:.12}",
        moduli[1]
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("counterexample spectrum", criterion_1),
        ("counterexample candidate normal", criterion_2),
        ("f·Ψ(ψⁿ(a)) closed forms", criterion_3),
        ("F_k family", criterion_4),
        ("counterexample scan N = 10⁶", criterion_5),
        ("contracting spectrum and verdict", criterion_6),
        ("erasing image has no bounded normal", criterion_7),
        ("property suite", criterion_8),
        ("sanity fixtures", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(why) => {
                println!("FAIL {id} {name}: {why}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
