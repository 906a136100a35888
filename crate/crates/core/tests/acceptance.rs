//! End-to-end acceptance checks. Each test prints a single PASS line on
//! success; a failure panics with the offending diagram and detail.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use varchenko::arrangement::{
    enumerate_regions, intersection_poset, parse_wiring_diagram, Geometry, PosetElement,
    WiringDiagram,
};
use varchenko::oracle::{
    bareiss_symbolic_determinant, brute_determinant, enumerate_diagrams, naive_regions,
    seeded_assignment, symbolic_determinant,
};
use varchenko::poly::VariableId;
use varchenko::reduction::{
    elimination_checkpoints, eliminate, good_numbering, reduced_entry_closed_form,
    verify_block_form, Block, BlockDiagonalForm,
};
use varchenko::varchenko::{
    determinant_formula_factors, leftover_determinant, leftover_matrix, predicted_diagonal_entries,
    varchenko_determinant_formula, varchenko_matrix, VarchenkoMatrix, WeightAssignment,
};
use varchenko::{Int, Poly};

const SEED: u64 = 7;

struct Instance {
    geom: Geometry,
    poset: Vec<PosetElement>,
    weights: WeightAssignment,
    vm: VarchenkoMatrix<Int>,
}

fn instance(w: &WiringDiagram) -> Instance {
    let geom = enumerate_regions(w);
    let poset = intersection_poset(w);
    let weights = WeightAssignment::standard(w.n);
    let topes: Vec<_> = (0..geom.num_regions())
        .map(|r| geom.tope(r).clone())
        .collect();
    let vm = varchenko_matrix::<Int>(&topes, &weights).unwrap();
    Instance {
        geom,
        poset,
        weights,
        vm,
    }
}

fn reduce(inst: &Instance) -> BlockDiagonalForm<Int> {
    let num = good_numbering(&inst.geom, &inst.poset).expect("no good numbering found");
    eliminate(&inst.geom, &inst.poset, &inst.weights, &inst.vm, &num).expect("elimination failed")
}

fn describe(w: &WiringDiagram) -> String {
    let events: Vec<String> = w
        .events
        .iter()
        .map(|e| format!("event {} {}", e.bottom, e.size))
        .collect();
    format!("wires {}; {}", w.n, events.join("; "))
}

/// Every diagram with up to `n_max` wires, including degenerate events.
fn corpus(n_max: usize, degenerate: bool) -> Vec<WiringDiagram> {
    (1..=n_max)
        .flat_map(|n| enumerate_diagrams(n, n * (n - 1) / 2, degenerate))
        .collect()
}

/// Criterion 1: the five-wire fixture with two triple points reduces to the
/// known 10×10 block diagonal form — scalars {1, 1−x1², …, 1−x5²} and two
/// 2×2 leftover blocks over the variable sets {x1,x2,x3} and {x1,x4,x5},
/// each equal to L³ in its recorded variable order. Under one second.
#[test]
fn criterion_1_five_wire_golden() {
    let start = Instant::now();
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/two_triple_points.wd"
    ))
    .unwrap();
    let w = parse_wiring_diagram(&text).unwrap();
    let inst = instance(&w);
    assert_eq!(inst.geom.num_regions(), 10);
    let bdf = reduce(&inst);

    let mut scalars: Vec<String> = Vec::new();
    let mut leftovers: Vec<&varchenko::varchenko::LeftoverMatrix<Int>> = Vec::new();
    for b in &bdf.blocks {
        match b {
            Block::Scalar { value, .. } => scalars.push(value.to_string()),
            Block::Leftover { matrix, .. } => leftovers.push(matrix),
        }
    }
    scalars.sort();
    let mut expected: Vec<String> = std::iter::once(Poly::one())
        .chain((1..=5).map(|i| Poly::one_minus_square([VariableId(i)])))
        .map(|p| p.to_string())
        .collect();
    expected.sort();
    assert_eq!(scalars, expected, "scalar multiset mismatch");

    assert_eq!(leftovers.len(), 2, "expected two leftover blocks");
    let mut var_sets: Vec<Vec<u32>> = leftovers
        .iter()
        .map(|l| {
            let mut vs: Vec<u32> = l.variable_order.iter().map(|v| v.0).collect();
            vs.sort();
            vs
        })
        .collect();
    var_sets.sort();
    assert_eq!(var_sets, vec![vec![1, 2, 3], vec![1, 4, 5]]);
    for l in &leftovers {
        let expected = leftover_matrix::<Int>(3, &l.variable_order);
        assert_eq!(l.matrix, expected.matrix, "block is not L³ in its order");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("PASS criterion-1 five-wire golden block form ({elapsed:?})");
}

/// Criterion 2: det(Lⁿ) = ∏(1−xᵢ²)·(1−x1²···x_n²)^{n−2} for n = 3..6,
/// with the determinant computed by an independent cofactor oracle.
#[test]
fn criterion_2_leftover_determinant() {
    let start = Instant::now();
    for n in 3..=6 {
        let vars: Vec<VariableId> = (1..=n as u32).map(VariableId).collect();
        let l = leftover_matrix::<Int>(n, &vars);
        let det = symbolic_determinant(&l.matrix);
        let formula = leftover_determinant::<Int>(n, &vars);
        assert_eq!(det, formula, "n={n}");
    }
    println!(
        "PASS criterion-2 leftover determinants n=3..6 ({:?})",
        start.elapsed()
    );
}

/// Criterion 3: for every diagram with at most 4 wires and every
/// elimination checkpoint k, each not-yet-finished entry equals the closed
/// form V_{m,n}·φ(∏_{i<k}(1−l_i(m,n)²)), and each finished entry is stable.
#[test]
fn criterion_3_closed_form_agreement() {
    let start = Instant::now();
    let diagrams = corpus(4, true);
    diagrams.par_iter().for_each(|w| {
        let inst = instance(w);
        let num = good_numbering(&inst.geom, &inst.poset).unwrap();
        let checkpoints =
            elimination_checkpoints(&inst.geom, &inst.poset, &inst.weights, &inst.vm, &num)
                .unwrap();
        let r = num.order.len();
        let final_w = &checkpoints.last().unwrap().1;
        for (k, mat) in &checkpoints {
            for m in 0..r {
                for n in 0..r {
                    if m >= *k || n >= *k {
                        let cf = reduced_entry_closed_form(
                            &inst.geom,
                            &inst.weights,
                            &inst.vm,
                            &num,
                            *k,
                            m,
                            n,
                        );
                        assert_eq!(
                            &cf,
                            mat.get(m, n),
                            "closed form mismatch at k={k} m={m} n={n} for [{}]",
                            describe(w)
                        );
                    } else {
                        assert_eq!(
                            mat.get(m, n),
                            final_w.get(m, n),
                            "finished entry changed at k={k} m={m} n={n} for [{}]",
                            describe(w)
                        );
                    }
                }
            }
        }
    });
    println!(
        "PASS criterion-3 closed-form agreement on {} diagrams ({:?})",
        diagrams.len(),
        start.elapsed()
    );
}

/// Criterion 4: every semigeneral diagram with at most 5 wires reduces to
/// 1×1 blocks only, with multiset exactly {∏_{a∈B}(1−x_a²)} over the
/// intersection poset.
#[test]
fn criterion_4_semigeneral_diagonal() {
    let start = Instant::now();
    let diagrams = corpus(5, false);
    diagrams.par_iter().for_each(|w| {
        assert!(w.is_semigeneral());
        let inst = instance(w);
        let bdf = reduce(&inst);
        let mut scalars: Vec<String> = Vec::new();
        for b in &bdf.blocks {
            match b {
                Block::Scalar { value, .. } => scalars.push(value.to_string()),
                Block::Leftover { .. } => {
                    panic!("leftover block in semigeneral diagram [{}]", describe(w))
                }
            }
        }
        scalars.sort();
        let mut expected: Vec<String> = predicted_diagonal_entries::<Int>(&inst.poset, &inst.weights)
            .iter()
            .map(|p| p.to_string())
            .collect();
        expected.sort();
        assert_eq!(scalars, expected, "diagonal multiset for [{}]", describe(w));
    });
    println!(
        "PASS criterion-4 semigeneral diagonal form on {} diagrams ({:?})",
        diagrams.len(),
        start.elapsed()
    );
}

/// Criterion 5: det(V) = ∏_M (1−x_M)^{l(M)} — numerically at three seeded
/// assignments for every diagram with at most 5 wires, and symbolically
/// (via fraction-free polynomial elimination) for at most 4 wires.
#[test]
fn criterion_5_determinant_formula() {
    let start = Instant::now();
    let diagrams = corpus(5, true);
    diagrams.par_iter().for_each(|w| {
        let inst = instance(w);
        let factors = determinant_formula_factors::<Int>(&inst.poset, &inst.weights);
        for i in 0..3u64 {
            let a = seeded_assignment(w.n, SEED.wrapping_add(i));
            let lhs = brute_determinant(&inst.vm.matrix, &a);
            let rhs = factors.iter().fold(BigRational::one(), |acc, (f, e)| {
                let v = f.evaluate(&a).unwrap();
                acc * num_traits::pow(v, *e as usize)
            });
            assert_eq!(lhs, rhs, "determinant value for [{}] seed {i}", describe(w));
        }
        if w.n <= 4 {
            let sym = bareiss_symbolic_determinant(&inst.vm.matrix);
            let formula = varchenko_determinant_formula::<Int>(&inst.poset, &inst.weights);
            assert_eq!(sym, formula, "symbolic determinant for [{}]", describe(w));
        }
    });
    println!(
        "PASS criterion-5 determinant formula on {} diagrams ({:?})",
        diagrams.len(),
        start.elapsed()
    );
}

/// Criterion 6: for every diagram with at most 4 wires, left·V·right equals
/// the final block form at three seeded assignments and both transformation
/// determinants are ±1.
#[test]
fn criterion_6_transformation_soundness() {
    let start = Instant::now();
    let diagrams = corpus(4, true);
    diagrams.par_iter().for_each(|w| {
        let inst = instance(w);
        let bdf = reduce(&inst);
        let report = verify_block_form(&bdf, &inst.poset, &inst.weights, SEED);
        for check in &report.checks {
            if check.name == "transformation-identity" || check.name == "unit-transformations" {
                assert!(
                    check.passed,
                    "{} failed for [{}]: {}",
                    check.name,
                    describe(w),
                    check.detail
                );
            }
        }
    });
    println!(
        "PASS criterion-6 transformation soundness on {} diagrams ({:?})",
        diagrams.len(),
        start.elapsed()
    );
}

/// Criterion 7: φ((1−P²)·∏(1−Xᵢ²P²)) = 1−P² for 200 seeded random choices
/// of disjoint squarefree variable products P, X₁..X_k (k ≤ 4, at most 8
/// variables in total).
#[test]
fn criterion_7_truncation_identity() {
    let start = Instant::now();
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(seed));
        let total_vars = rng.gen_range(2..=8usize);
        let mut vars: Vec<VariableId> = (1..=total_vars as u32).map(VariableId).collect();
        // Random partition into P plus k disjoint factors.
        for i in (1..vars.len()).rev() {
            vars.swap(i, rng.gen_range(0..=i));
        }
        let k = rng.gen_range(1..=4usize.min(total_vars - 1));
        let p_len = rng.gen_range(1..=total_vars - k);
        let (p_vars, rest) = vars.split_at(p_len);
        let p = Poly::product_of_vars(p_vars.iter().copied());

        // Split the remaining variables into k nonempty groups.
        let mut groups: Vec<Vec<VariableId>> = vec![Vec::new(); k];
        for (i, &v) in rest.iter().enumerate() {
            if i < k {
                groups[i].push(v);
            } else {
                let g = rng.gen_range(0..k);
                groups[g].push(v);
            }
        }

        let one = Poly::one();
        let p2 = p.mul(&p);
        let mut product = one.sub(&p2);
        for g in &groups {
            if g.is_empty() {
                continue;
            }
            let x = Poly::product_of_vars(g.iter().copied());
            let xp = x.mul(&p);
            product = product.mul(&one.sub(&xp.mul(&xp)));
        }
        let truncated = product.phi();
        let expected = one.sub(&p2);
        assert_eq!(truncated, expected, "seed {seed}");
    }
    println!(
        "PASS criterion-7 truncation identity on 200 instances ({:?})",
        start.elapsed()
    );
}

/// Criterion 8: the brute-force sign-vector region oracle agrees with the
/// sweep enumeration on every diagram with at most 5 wires, and the region
/// count matches 1 + n + Σ(multiplicity − 1).
#[test]
fn criterion_8_oracle_cross_checks() {
    let start = Instant::now();
    let diagrams = corpus(5, true);
    diagrams.par_iter().for_each(|w| {
        let geom = enumerate_regions(w);
        let sweep: std::collections::BTreeSet<_> =
            (0..geom.num_regions()).map(|r| geom.tope(r).clone()).collect();
        let naive = naive_regions(w);
        assert_eq!(sweep, naive, "region sets for [{}]", describe(w));
        let expected = 1 + w.n + w.events.iter().map(|e| e.size - 1).sum::<usize>();
        assert_eq!(geom.num_regions(), expected, "region count for [{}]", describe(w));
    });
    println!(
        "PASS criterion-8 oracle cross-checks on {} diagrams ({:?})",
        diagrams.len(),
        start.elapsed()
    );
}
