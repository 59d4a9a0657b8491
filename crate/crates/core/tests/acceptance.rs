//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use css_surgery::chain::{ChainComplex, ChainMap};
use css_surgery::codemap::{circuit_f2_action, synthesize_circuit, CodeMap, Direction};
use css_surgery::colimit;
use css_surgery::csscode::{OperatorClass, SearchBudget};
use css_surgery::cubical::{self, pushout_acc, verify_cocontinuity};
use css_surgery::stabsim::{
    pauli_transport_check, prepare_plan_input, run_merge_protocol, FreshState, LogicalState, ProtocolOptions,
};
use css_surgery::surgery::{self, GaugeFix, MergeOptions, MergeResult, SandwichPlan, SurgeryError};
use css_surgery::{BitVec, CssCode, F2Matrix, Kind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

fn opts() -> MergeOptions<'static> {
    MergeOptions::default()
}

fn dd_zero(c: &ChainComplex) -> bool {
    c.degrees().into_iter().all(|n| oracle_mul(&c.diff(n - 1), &c.diff(n)).is_zero())
}

/// Smallest-weight logical of the given kind, by exhaustive enumeration.
fn min_weight_logical(code: &CssCode, kind: Kind, max_weight: usize) -> Option<BitVec> {
    let n = code.n();
    for w in 1..=max_weight.min(n) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let v = BitVec::from_indices(n, &idx);
            if code.classify(&v, kind) == OperatorClass::Logical {
                return Some(v);
            }
            let mut i = w;
            while i > 0 && idx[i - 1] == n - w + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

fn shor_plan() -> SandwichPlan {
    let u = bits("100100100");
    surgery::build_sandwich(&shor(), &shor(), &u, &u, &opts()).unwrap()
}

fn c1_shor() -> Check {
    let m = shor().metrics().map_err(|e| e.to_string())?;
    ensure!((m.n, m.k, m.d) == (9, 1, Some(3)), "got n={} k={} d={:?}", m.n, m.k, m.d);
    Ok(())
}

fn c2_toric() -> Check {
    let code = code_of(&cubical::toric(3, 3).unwrap());
    let m = code.metrics().map_err(|e| e.to_string())?;
    ensure!((m.n, m.k) == (18, 2), "got n={} k={}", m.n, m.k);
    let (dz, dx) = brute_force_distances(&code);
    ensure!(dz == Some(3) && dx == Some(3), "exhaustive search gives {dz:?}, {dx:?}");
    ensure!(m.d == Some(3), "library distance {:?}", m.d);
    Ok(())
}

fn c3_patch() -> Check {
    let code = code_of(&cubical::patch(3, 3).unwrap());
    let m = code.metrics().map_err(|e| e.to_string())?;
    ensure!((m.n, m.k, m.d_z, m.d_x) == (13, 1, Some(3), Some(3)), "got {m:?}");
    Ok(())
}

fn c4_small_pushout() -> Check {
    let (f, g) = small_pushout_chain_span();
    let p = colimit::pushout(&f, &g).map_err(|e| e.to_string())?;
    let q = &p.apex;
    ensure!((q.dim(1), q.dim(0), q.dim(-1)) == (2, 5, 2), "Q dims");
    ensure!(homology_dim(&p.sum, 0) == 0 && p.sum.homology_dim(0) == 0, "H0(C+D)");
    ensure!(homology_dim(q, 0) == 1 && q.homology_dim(0) == 1, "H0(Q)");
    let printed_q = small_pushout_q();
    ensure!(complex_isomorphism(q, &printed_q).is_some(), "Q differs from the printed complex");
    for n in [0, -1] {
        ensure!(rank(&q.diff(n)) == rank(&printed_q.diff(n)), "rank of d_{n}");
    }
    let (c0, cm1) = small_pushout_coeq();
    let mut comps = BTreeMap::new();
    comps.insert(1, F2Matrix::identity(2));
    comps.insert(0, c0);
    comps.insert(-1, cm1);
    let printed = ChainMap::new(p.sum.clone(), printed_q, comps).map_err(|e| e.to_string())?;
    ensure!(map_isomorphism(&p.coeq, &printed).is_some(), "coequaliser differs from the printed one");
    Ok(())
}

fn c5_shor_merges() -> Check {
    let code = shor();
    let all = bits("111111111");
    let m = surgery::z_merge(&code, &code, &all, &all, &opts()).map_err(|e| e.to_string())?;
    let pzt = code.p_z().transpose();
    ensure!(m.merged.z_complex().diff(0) == pzt.hstack(&pzt), "full merge d0");
    let u = bits("100100100");
    let m = surgery::z_merge(&code, &code, &u, &u, &opts()).map_err(|e| e.to_string())?;
    let q = m.merged.z_complex();
    ensure!((q.dim(1), q.dim(0), q.dim(-1)) == (12, 15, 2), "Z1Z4Z7 merge dims");
    ensure!(m.merged.k() == 1 && homology_dim(q, 0) == 1, "Z1Z4Z7 merge k");
    Ok(())
}

fn c6_sandwich() -> Check {
    let plan = shor_plan();
    let t = plan.sandwiched.z_complex();
    ensure!((t.dim(1), t.dim(0), t.dim(-1)) == (15, 20, 4), "T dims");
    ensure!((plan.fresh_qubits, plan.new_z_checks) == (2, 3), "r, m");
    ensure!(homology_dim(t, 0) == 1 && plan.sandwiched.k() == 1, "H0(T)");
    let printed = shor_sandwich_t();
    for n in [0, -1] {
        ensure!(rank(&t.diff(n)) == rank(&printed.diff(n)), "rank of d_{n}");
    }
    ensure!(complex_isomorphism(t, &printed).is_some(), "T differs from the printed complex");
    ensure!(
        surgery::check_distance_bounded_below(&plan, 3, &SearchBudget::default()).map_err(|e| e.to_string())?,
        "library finds a Z logical below weight 3"
    );
    let (dz, _) = brute_force_distances(&plan.sandwiched);
    ensure!(dz.is_some_and(|d| d >= 3), "exhaustive d_z(T) = {dz:?}");
    Ok(())
}

fn c7_synthesis_and_transport() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let (r, c) = (rng.random_range(0..=12), rng.random_range(0..=12));
        let density = rng.random_range(0.05..0.95);
        let m = random_matrix(&mut rng, r, c, density);
        let circuit = synthesize_circuit(&m);
        let action = circuit_f2_action(&circuit).map_err(|e| e.to_string())?;
        ensure!(action == m, "round trip {i} ({r}x{c}) differs");
    }
    for i in 0..50 {
        let c = random_code(&mut rng, 5 + i % 4, 2, 2, 0.5);
        let d = random_code(&mut rng, 6 + i % 3, 2, 2, 0.5);
        let f = random_chain_map(&mut rng, c.z_complex(), d.z_complex());
        let dir = if i % 2 == 0 { Direction::ZPreserving } else { Direction::XPreserving };
        let map = CodeMap::from_chain_map(&c, &d, &f, dir).map_err(|e| e.to_string())?;
        ensure!(pauli_transport_check(&map, 8, i as u64).map_err(|e| e.to_string())?, "transport fails on map {i}");
    }
    Ok(())
}

/// `code` with qubits relabelled by `perm` (C qubit `i` becomes `perm[i]`)
/// and checks shuffled.
fn permuted_copy(code: &CssCode, perm: &[usize], rng: &mut impl Rng) -> CssCode {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let shuffle = |m: F2Matrix, rng: &mut _| {
        let mut rows: Vec<usize> = (0..m.nrows()).collect();
        rows.shuffle(rng);
        m.select_rows(&rows).select_columns(&inv)
    };
    let px = shuffle(code.p_x(), rng);
    let pz = shuffle(code.p_z(), rng);
    CssCode::from_parity_checks(&px, &pz).unwrap()
}

fn ldpc_holds(m: &MergeResult, c: &CssCode, d: &CssCode) -> Check {
    let report = surgery::ldpc_bounds_check(m, &c.weight_profile(), &d.weight_profile());
    ensure!(report.holds(), "bounds fail: {:?}", report.bounds);
    Ok(())
}

fn c8_ldpc() -> Check {
    let mut corpus = 0;
    let shor = shor();
    for (c, kind, v) in [
        (shor.clone(), Kind::Z, bits("100100100")),
        (shor.clone(), Kind::X, bits("111000000")),
        (code_of(&cubical::toric(3, 3).unwrap()), Kind::Z, BitVec::zeros(0)),
        (code_of(&cubical::toric(3, 3).unwrap()), Kind::X, BitVec::zeros(0)),
        (code_of(&cubical::patch(3, 3).unwrap()), Kind::Z, BitVec::zeros(0)),
        (code_of(&cubical::patch(3, 3).unwrap()), Kind::X, BitVec::zeros(0)),
    ] {
        let v = if v.is_empty() { min_weight_logical(&c, kind, 3).ok_or("no logical")? } else { v };
        let m = surgery::merge(&c, &c, &v, &v, kind, &opts()).map_err(|e| format!("{kind:?} merge: {e}"))?;
        ldpc_holds(&m, &c, &c)?;
        corpus += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut random = 0;
    let mut attempts = 0;
    while random < 50 {
        attempts += 1;
        ensure!(attempts <= 2000, "only {random} separated random merges in {attempts} attempts");
        let n = rng.random_range(6..=10);
        let (rx, rz) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let c = random_code(&mut rng, n, rx, rz, 0.4);
        // Zero rows are not checks; with none left the strict bound has no room.
        if c.k() == 0 || [c.p_x(), c.p_z()].iter().any(|m| m.rows().iter().any(BitVec::is_zero)) {
            continue;
        }
        let kind = if rng.random_bool(0.5) { Kind::Z } else { Kind::X };
        let Some(vc) = min_weight_logical(&c, kind, n) else { continue };
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let d = permuted_copy(&c, &perm, &mut rng);
        let pairing: Vec<usize> = vc.iter_ones().map(|i| perm[i]).collect();
        let vd = BitVec::from_indices(n, &pairing);
        let o = MergeOptions { pairing: Some(&pairing), ..opts() };
        match surgery::merge(&c, &d, &vc, &vd, kind, &o) {
            Ok(m) => {
                ldpc_holds(&m, &c, &d)?;
                ensure!(m.counts().consistent, "counts of random merge {random}");
                random += 1;
            }
            Err(SurgeryError::NotSeparated(_)) => {}
            Err(e) => return Err(format!("random merge: {e}")),
        }
    }
    corpus += random;
    for m in 3..=8 {
        let (f, g) = star_span(m);
        ensure!(verify_cocontinuity(&f, &g).map_err(|e| e.to_string())?, "star {m} not cocontinuous");
        let q = pushout_acc(&f, &g).map_err(|e| e.to_string())?.complex.to_chain_complex();
        ensure!(q.diff(-1).max_row_weight() == m + 1, "star {m}: weight {}", q.diff(-1).max_row_weight());
        ensure!(f.target().to_chain_complex().diff(-1).max_row_weight() == 1, "star {m}: input weight");
    }
    ensure!(corpus >= 56, "corpus size {corpus}");
    Ok(())
}

fn c9_gauge() -> Check {
    let code = shor();
    let r = surgery::check_gauge_fixable(&code, &bits("111111111"), Kind::Z).map_err(|e| e.to_string())?;
    ensure!(!r.is_fixable(), "weight-9 operator reported fixable");
    match surgery::check_gauge_fixable(&code, &bits("100100100"), Kind::Z).map_err(|e| e.to_string())? {
        GaugeFix::Fixable { operators } => {
            let want = vec![bits("111000000"), bits("000111000"), bits("000000111")];
            ensure!(operators == want, "fixing operators {operators:?}");
        }
        other => return Err(format!("Z1Z4Z7 gives {other:?}")),
    }
    Ok(())
}

fn c10_protocol() -> Check {
    use LogicalState::{One, Plus, Zero};
    let plan = shor_plan();
    let run = |input: &[LogicalState], seed: u64, fresh: Vec<FreshState>| {
        let state = prepare_plan_input(&plan, input).map_err(|e| e.to_string())?;
        run_merge_protocol(&plan, &state, &ProtocolOptions { seed, fresh, frame_only: false }).map_err(|e| e.to_string())
    };
    let cases: [(&[LogicalState], i8); 4] = [(&[Zero, Zero], 1), (&[Zero, One], -1), (&[One, Zero], -1), (&[One, One], 1)];
    for (input, expected) in cases {
        for seed in 0..20 {
            let out = run(input, seed, Vec::new())?;
            ensure!(out.c_l == expected, "{input:?} seed {seed}: c_L = {}", out.c_l);
            ensure!(out.verified(), "{input:?} seed {seed}: unsatisfied {:?}", out.unsatisfied);
            let pz = plan.sandwiched.p_z();
            for row in &pz.rows()[plan.new_check_offset()..] {
                let p = css_surgery::stabsim::PauliString::z_string(row);
                ensure!(out.final_state.expectation(&p) == Some(1), "{input:?}: new check not restored");
            }
        }
    }
    let mut plus = 0usize;
    let seeds = 200;
    for seed in 0..seeds {
        let out = run(&[Plus, Plus], seed, Vec::new())?;
        ensure!(out.verified(), "|++> seed {seed}: unsatisfied {:?}", out.unsatisfied);
        if out.c_l == 1 {
            plus += 1;
        }
    }
    let sigma = (seeds as f64 * 0.25).sqrt();
    let dev = (plus as f64 - seeds as f64 / 2.0).abs();
    ensure!(plus > 0 && plus < seeds as usize, "|++> gave a single outcome");
    ensure!(dev <= 5.0 * sigma, "|++> frequency {plus}/{seeds}");
    let inputs: [&[LogicalState]; 5] = [&[Zero, Zero], &[Zero, One], &[One, Zero], &[One, One], &[Plus, Plus]];
    for input in inputs {
        for seed in 0..10 {
            let clean = run(input, seed, Vec::new())?;
            for i in 0..plan.fresh_qubits {
                let mut fresh = vec![FreshState::Plus; plan.fresh_qubits];
                fresh[i] = FreshState::Minus;
                let bad = run(input, seed, fresh)?;
                ensure!(
                    bad.c_l == clean.c_l && bad.per_check == clean.per_check,
                    "{input:?} seed {seed}: corrupting fresh qubit {i} changes the outcome"
                );
            }
        }
    }
    Ok(())
}

fn c11_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shape = |rng: &mut ChaCha8Rng| {
        let low = rng.random_range(-2..=1);
        let len = rng.random_range(1..=3);
        (low, (0..len).map(|_| rng.random_range(0..=5)).collect::<Vec<usize>>())
    };
    for i in 0..100 {
        let (la, da) = shape(&mut rng);
        let (lb, db) = shape(&mut rng);
        let a = random_complex(&mut rng, la, &da);
        let b = random_complex(&mut rng, lb, &db);
        let t = a.tensor(&b);
        ensure!(dd_zero(&t), "tensor {i}: dd != 0");
        for n in la + lb..la + lb + (da.len() + db.len()) as i32 {
            let want: usize = (la..la + da.len() as i32).map(|p| homology_dim(&a, p) * homology_dim(&b, n - p)).sum();
            ensure!(homology_dim(&t, n) == want, "tensor {i}: Kunneth fails in degree {n}");
        }
        let dd = a.dual().dual();
        ensure!(dd.components() == a.components() && dd.differentials() == a.differentials(), "dual {i}");
        ensure!(dd_zero(&a.dual()), "dual {i}: dd != 0");
        let s = a.direct_sum(&b);
        for n in -3..=4 {
            ensure!(homology_dim(&s, n) == homology_dim(&a, n) + homology_dim(&b, n), "sum {i}: degree {n}");
        }
    }
    let plan = shor_plan();
    let mut complexes = vec![
        cubical::toric(3, 3).unwrap().to_chain_complex(),
        cubical::patch(3, 3).unwrap().to_chain_complex(),
        octagon().0.to_chain_complex(),
        holed_patch(2).to_chain_complex(),
        shor_sandwich_w(),
        shor_sandwich_r(),
        shor_sandwich_t(),
        small_pushout_q(),
        plan.sandwiched.z_complex().clone(),
        plan.half.clone(),
        plan.intermediate.clone(),
    ];
    let (f, g) = small_pushout_chain_span();
    complexes.push(colimit::pushout(&f, &g).unwrap().apex);
    for c in &complexes {
        ensure!(dd_zero(c) && dd_zero(&c.dual()), "dd != 0 on a construction");
    }
    for (name, (f, g)) in [("small", small_pushout_span()), ("lattice surgery", lattice_surgery_span())] {
        ensure!(verify_cocontinuity(&f, &g).map_err(|e| e.to_string())?, "{name} span is not cocontinuous");
    }
    let mut codes = vec![
        shor(),
        code_of(&cubical::toric(3, 3).unwrap()),
        code_of(&cubical::patch(3, 3).unwrap()),
        code_of(&octagon().0),
        code_of(&holed_patch(1)),
        plan.sandwiched.clone(),
    ];
    for _ in 0..100 {
        let n = rng.random_range(4..14);
        let (rx, rz) = (rng.random_range(1..5), rng.random_range(1..5));
        codes.push(random_code(&mut rng, n, rx, rz, 0.4));
    }
    for c in &codes {
        ensure!(c.k() == c.n() - rank(&c.p_x()) - rank(&c.p_z()), "rank-nullity fails for n = {}", c.n());
    }
    Ok(())
}

fn c12_negative() -> Check {
    let budget = SearchBudget::default();
    let (cx, idx) = octagon();
    let code = code_of(&cx);
    let corner = grid_path(&cx, &idx, &[(2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
    let upper = grid_path(&cx, &idx, &[(0, 4), (1, 4), (1, 5), (2, 5), (2, 6)]);
    let u = corner.xor(&upper);
    let verdict = surgery::check_separation(&code, &code, &u, &u, Kind::Z, None, &budget).map_err(|e| e.to_string())?;
    ensure!(!verdict.is_separated(), "octagon operator reported separated");
    let (c, d) = (holed_patch(2), holed_patch(1));
    let (code_c, code_d) = (code_of(&c), code_of(&d));
    let vc = patch_column(&c, 8, 3);
    let vd = patch_column(&d, 8, 0);
    let pairing = vd.support();
    let o = MergeOptions { pairing: Some(&pairing), ..opts() };
    let plan = surgery::build_sandwich(&code_c, &code_d, &vc, &vd, &o).map_err(|e| e.to_string())?;
    let d_before = plan.report.d_c.zip(plan.report.d_d).map(|(a, b)| a.min(b)).ok_or("missing distances")?;
    let bounded = surgery::check_distance_bounded_below(&plan, d_before, &budget).map_err(|e| e.to_string())?;
    ensure!(!bounded, "holed patch reported bounded below {d_before}");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 Shor code metrics", Some(Duration::from_secs(1)), c1_shor),
        ("2 toric 3x3 code", Some(Duration::from_secs(5)), c2_toric),
        ("3 surface patch", Some(Duration::from_secs(1)), c3_patch),
        ("4 small pushout", None, c4_small_pushout),
        ("5 Shor merges", None, c5_shor_merges),
        ("6 sandwiched Shor code", Some(Duration::from_secs(10)), c6_sandwich),
        ("7 circuit round trip and transport", None, c7_synthesis_and_transport),
        ("8 LDPC bounds", None, c8_ldpc),
        ("9 gauge fixing", None, c9_gauge),
        ("10 merge protocol", Some(Duration::from_secs(30)), c10_protocol),
        ("11 property suites", None, c11_properties),
        ("12 negative fixtures", None, c12_negative),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(()), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(()) => println!("PASS  {name} ({elapsed:.2?})"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name} ({elapsed:.2?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
