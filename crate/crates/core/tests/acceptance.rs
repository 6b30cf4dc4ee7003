//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use tensor_spectra::combinatorics::{
    ballot_condition, build_walk_graph, characteristic_pair, class_one_witness, count_delta3_bruteforce,
    count_delta4_bruteforce, degree_profile, enumerate_canonical, enumerate_class_one, reconstruct_delta1,
    CanonicalSequence, DeltaClass,
};
use tensor_spectra::moments::{
    carleman_report, limit_moment_symbolic, limit_moment_value, moment_table, LimitParams, TauMoments,
};
use tensor_spectra::numeric::{binomial, narayana};
use tensor_spectra::oracle::exact_expected_trace_moment;
use tensor_spectra::simulator::{gram_matrix, run_experiment, sample_base_vectors, trace_moments_from_gram};
use tensor_spectra::{BaseDistribution, ExperimentConfig, Scheme};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// `((s, θ exponent), coefficient)` pairs.
type Terms = &'static [((usize, u64), u64)];

fn seq(v: &[u32]) -> CanonicalSequence {
    CanonicalSequence::new(v.to_vec()).unwrap()
}

/// Witnesses found by trying every canonical row sequence with `p + 1 − s` values.
fn brute_force_witnesses(alpha: &CanonicalSequence) -> Vec<Vec<u32>> {
    let p = alpha.len();
    enumerate_canonical(p + 1 - alpha.distinct(), p)
        .unwrap()
        .into_iter()
        .filter(|i| build_walk_graph(i.entries(), alpha).unwrap().delta_class() == DeltaClass::Delta1)
        .map(|i| i.entries().to_vec())
        .collect()
}

fn class_one_counts() -> Outcome {
    let start = Instant::now();
    let mut rows = Vec::new();
    for p in 1..=7 {
        for s in 1..=p {
            let brute =
                enumerate_canonical(s, p).unwrap().iter().filter(|a| !brute_force_witnesses(a).is_empty()).count();
            let want = narayana(p as u64, s as u64);
            if BigUint::from(brute) != want {
                return Err(format!("p={p} s={s}: brute force {brute}, Narayana {want}"));
            }
            if p == 4 {
                rows.push(brute.to_string());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("1 <= s <= p <= 7 match; p=4 row {} ({secs:.2} s)", rows.join(", ")))
}

fn witness_uniqueness() -> Outcome {
    let mut checked = 0;
    let mut with_witness = 0;
    for p in 1..=7 {
        for s in 1..=p {
            for alpha in enumerate_canonical(s, p).unwrap() {
                let brute = brute_force_witnesses(&alpha);
                if brute.len() > 1 {
                    return Err(format!("{alpha} has {} witnesses", brute.len()));
                }
                let rebuilt = class_one_witness(&alpha);
                if rebuilt.as_ref() != brute.first() {
                    return Err(format!("{alpha}: reconstruction {rebuilt:?}, brute force {brute:?}"));
                }
                checked += 1;
                with_witness += brute.len();
            }
        }
    }
    Ok(format!("{checked} sequences, {with_witness} witnesses, 0 mismatches"))
}

fn ballot_counterexample() -> Outcome {
    let alpha = seq(&[1, 2, 1, 2]);
    let pair = characteristic_pair(&alpha);
    if pair.u != [1, 0, 0, 0] || pair.d != [0, 0, 0, -1] {
        return Err(format!("pair u={:?} d={:?}", pair.u, pair.d));
    }
    if !ballot_condition(&pair) {
        return Err("ballot condition fails".into());
    }
    let (rebuilt, rows) = reconstruct_delta1(&pair).map_err(|e| e.to_string())?;
    if rebuilt != seq(&[1, 2, 2, 2]) {
        return Err(format!("reconstructed {rebuilt}"));
    }
    let g = build_walk_graph(&rows, &rebuilt).map_err(|e| e.to_string())?;
    if g.delta_class() != DeltaClass::Delta1 {
        return Err(format!("reconstructed graph is {}", g.delta_class()));
    }
    if !brute_force_witnesses(&alpha).is_empty() || class_one_witness(&alpha).is_some() {
        return Err("(1,2,1,2) has a paired-tree witness".into());
    }
    // with r + s = p the graph of α closes one cycle of doubled edges
    let leading: Vec<DeltaClass> = enumerate_canonical(2, 4)
        .unwrap()
        .iter()
        .map(|i| build_walk_graph(i.entries(), &alpha).unwrap().delta_class())
        .collect();
    let g3 = build_walk_graph(&[1, 1, 2, 2], &alpha).unwrap();
    if g3.delta_class() != DeltaClass::Delta3 || !leading.contains(&DeltaClass::Delta3) {
        return Err(format!("i=(1,1,2,2) gives {}", g3.delta_class()));
    }
    let g5 = build_walk_graph(&[1, 1, 1, 1], &alpha).unwrap();
    if g5.delta_class() != DeltaClass::Delta5 {
        return Err(format!("i=(1,1,1,1) gives {}", g5.delta_class()));
    }
    Ok("u=(1,0,0,0) d=(0,0,0,-1) ballot ok; rebuilds (1,2,2,2) with i=(1,2,3,1); \
        α=(1,2,1,2) has no witness and i=(1,1,2,2) is Δ3 (i=(1,1,1,1) is Δ5)"
        .into())
}

fn delta_closed_forms() -> Outcome {
    let mut checked = 0;
    for p in 1..=6 {
        for s in 1..=p {
            for alpha in enumerate_class_one(s, p).unwrap() {
                let pairs: u64 = degree_profile(&alpha).iter().map(|(_, d)| binomial(d as u64, 2)).sum();
                let d4 = count_delta4_bruteforce(&alpha) as u64;
                let d3 = count_delta3_bruteforce(&alpha) as u64;
                let want3 = binomial((p + 1 - s) as u64, 2) - pairs;
                if d4 != pairs || d3 != want3 {
                    return Err(format!("{alpha}: Δ4 {d4} vs {pairs}, Δ3 {d3} vs {want3}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} class-one sequences, p <= 6"))
}

fn low_order_polynomials() -> Outcome {
    let expected: [(usize, Terms); 3] = [
        (2, &[((1, 1), 1), ((2, 0), 1)]),
        (3, &[((1, 3), 1), ((2, 1), 3), ((3, 0), 1)]),
        (4, &[((1, 6), 1), ((2, 3), 4), ((2, 2), 2), ((3, 1), 6), ((4, 0), 1)]),
    ];
    let mut shown = Vec::new();
    for (p, terms) in expected {
        let poly = limit_moment_symbolic(p).map_err(|e| e.to_string())?;
        let want: BTreeMap<(usize, u64), BigUint> = terms.iter().map(|(k, v)| (*k, BigUint::from(*v))).collect();
        if poly.collapse_unit_tau() != want {
            return Err(format!("γ{p} = {}", poly.display_unit_tau()));
        }
        shown.push(format!("γ{p} = {}", poly.display_unit_tau()));
    }
    let params = LimitParams::new(2.0, 0.5, 2.0).unwrap();
    let tau = TauMoments::from_values(vec![3.0, 10.0]);
    let g1 = limit_moment_value(1, &params, &tau).map_err(|e| e.to_string())?;
    if g1 != 6.0 {
        return Err(format!("γ1 = {g1} for c = 2, m1 = 3"));
    }
    let table = moment_table(2, &params, &tau).map_err(|e| e.to_string())?;
    let note = table.gamma1_note.ok_or("missing γ1 note")?;
    Ok(format!("{}; γ1 = c·m1 = 6 at (c, m1) = (2, 3); note: {note}", shown.join("; ")))
}

fn mp_reduction() -> Outcome {
    let cs = [(1, 1), (1, 3), (5, 2), (7, 10)];
    for p in 1..=8 {
        let poly = limit_moment_symbolic(p).map_err(|e| e.to_string())?;
        for (num, den) in cs {
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            let got = poly.evaluate_unit_tau_exact(&c, &BigRational::one());
            let mut want = BigRational::zero();
            for s in 1..=p {
                let coeff = BigRational::from_integer(BigInt::from(narayana(p as u64, s as u64)));
                want += coeff * num_traits::pow(c.clone(), s);
            }
            if got != want {
                return Err(format!("p={p} c={c}: {got} vs {want}"));
            }
        }
    }
    Ok("p <= 8 exact at c in {1, 1/3, 5/2, 7/10}".into())
}

fn oracle_vs_simulation() -> Outcome {
    let cases = [(2, 2, 3, 2), (2, 2, 3, 3), (3, 2, 4, 2)];
    let laws = [BaseDistribution::ComplexGaussian, BaseDistribution::Phase];
    let mut reruns = 0;
    let mut worst: f64 = 0.0;
    for (ci, (n, k, m, p)) in cases.into_iter().enumerate() {
        for (li, dist) in laws.into_iter().enumerate() {
            let exact = exact_expected_trace_moment(n, k, m, p, &vec![1.0; m], &dist).map_err(|e| e.to_string())?;
            let mut passed = false;
            let mut last = String::new();
            for attempt in 0..2u64 {
                let seed = 7_000 + 100 * ci as u64 + 10 * li as u64 + attempt;
                let cfg = ExperimentConfig::new(n, k, m, p, dist).with_replicas(10_000).with_seed(seed);
                let s = run_experiment(&cfg).map_err(|e| e.to_string())?;
                let st = &s.moments[p - 1];
                let se = st.stderr.unwrap();
                let z = (st.mean - exact).abs() / se;
                last = format!("{dist} ({n},{k},{m},{p}): {:.5} ± {:.5} vs {exact:.5}", st.mean, se);
                if z <= 4.0 {
                    worst = worst.max(z);
                    passed = true;
                    reruns += attempt as usize;
                    break;
                }
            }
            if !passed {
                return Err(last);
            }
        }
    }
    Ok(format!("6 cases within 4 stderr (max z = {worst:.2}, re-runs used: {reruns})"))
}

fn gram_path() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, k, m) in [(2, 3, 4), (3, 2, 5)] {
        for dist in BaseDistribution::ALL {
            let v = sample_base_vectors(n, k, m, &dist, 31, 0);
            let taus = vec![1.0; m];
            let fast = trace_moments_from_gram(&gram_matrix(&v), &taus, 4, n, k).map_err(|e| e.to_string())?;
            let dense = common::dense_trace_moments(&v, &taus, 4);
            for p in 0..4 {
                let rel = (fast[p] - dense[p]).abs() / dense[p].abs();
                worst = worst.max(rel);
                if rel > 1e-10 {
                    return Err(format!("{dist} ({n},{k},{m}) p={}: rel error {rel:e}", p + 1));
                }
            }
        }
    }
    Ok(format!("p <= 4, max relative error {worst:.1e}"))
}

fn convergence_trend() -> Outcome {
    let start = Instant::now();
    let scheme = Scheme::new(1.0, 1.0).unwrap();
    let gap = |n: usize| -> Result<(f64, f64), String> {
        let cfg = ExperimentConfig::from_scheme(n, scheme, 2, BaseDistribution::Phase).with_replicas(1000).with_seed(9);
        let s = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let st = &s.moments[1];
        Ok(((st.mean - 2.0).abs(), st.stderr.unwrap()))
    };
    let (g2, se2) = gap(2)?;
    let (g4, se4) = gap(4)?;
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("gap n=2: {g2:.4} (se {se2:.4}), n=4: {g4:.4} (se {se4:.4}), {secs:.1} s");
    if g4 < g2 && secs < 300.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn variance_decay() -> Outcome {
    let scheme = Scheme::new(1.0, 1.0).unwrap();
    let mut rows = Vec::new();
    for n in [2usize, 3] {
        let cfg = ExperimentConfig::from_scheme(n, scheme, 2, BaseDistribution::ComplexGaussian)
            .with_replicas(10_000)
            .with_seed(40 + n as u64);
        let s = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let var = s.moments[1].variance.unwrap();
        rows.push((n, var, var * (n as f64).powi(s.sizes.k as i32)));
    }
    let (v2, v3) = (rows[0].1, rows[1].1);
    let scaled: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let spread = scaled.iter().cloned().fold(f64::MIN, f64::max) / scaled.iter().cloned().fold(f64::MAX, f64::min);
    let detail =
        format!("Var n=2: {v2:.4e}, n=3: {v3:.4e}; Var·n^k: {:.4}, {:.4} (spread {spread:.2})", scaled[0], scaled[1]);
    if v3 < v2 && spread <= 10.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn carleman_lower_bound() -> Outcome {
    let params = LimitParams::new(1.0, 1.0, 2.0).unwrap();
    let theta = params.theta();
    let tau = TauMoments::unit(6);
    let gammas: Vec<f64> =
        (1..=6).map(|p| limit_moment_value(p, &params, &tau)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for (j, g) in gammas.iter().enumerate() {
        let p = j + 1;
        let bound = theta.powi((p * (p - 1) / 2) as i32);
        if *g < bound {
            return Err(format!("γ{p} = {g} < {bound}"));
        }
    }
    let report = carleman_report(&gammas, Some((1.0, theta))).map_err(|e| e.to_string())?;
    if report.lower_bound.iter().any(|r| r.ratio < 1.0) {
        return Err("report lists a ratio below 1".into());
    }
    Ok(format!("γ6 / θ^15 = {:.4}", gammas[5] / theta.powi(15)))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("class-one counts equal Narayana numbers", class_one_counts),
        ("paired-tree witness uniqueness and reconstruction", witness_uniqueness),
        ("(1,2,1,2) characteristic pair example", ballot_counterexample),
        ("Δ3/Δ4 closed forms", delta_closed_forms),
        ("symbolic γ2, γ3, γ4 and γ1 flag", low_order_polynomials),
        ("Marchenko-Pastur reduction", mp_reduction),
        ("oracle vs simulation", oracle_vs_simulation),
        ("Gram path vs materialized tensors", gram_path),
        ("convergence trend under scheme (1, 1)", convergence_trend),
        ("variance decay", variance_decay),
        ("Carleman lower bound", carleman_lower_bound),
    ];
    let mut failed = 0;
    for (j, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail}", j + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {detail}", j + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
