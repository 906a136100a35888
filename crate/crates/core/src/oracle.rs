//! Independent brute-force implementations used to validate the symbolic
//! results: exact determinants, exhaustive small-diagram generation, and a
//! naive region enumeration. These deliberately share no code with the
//! modules they check beyond the polynomial type itself.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{Event, Tope, WiringDiagram};
use crate::poly::{Coeff, Polynomial, VariableId};
use crate::varchenko::PolyMatrix;

/// Exact determinant of a polynomial matrix at a rational assignment, via
/// fraction-free (Bareiss) elimination over the integers after clearing
/// denominators row by row.
pub fn brute_determinant<C: Coeff>(
    m: &PolyMatrix<C>,
    assignment: &BTreeMap<VariableId, BigRational>,
) -> BigRational {
    let n = m.size();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<BigRational> = (0..n)
            .map(|j| m.get(i, j).evaluate(assignment).expect("full assignment"))
            .collect();
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, v| num_integer::lcm(acc, v.denom().clone()));
        a.push(
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
        scale *= lcm;
    }

    // Bareiss: a[i][j] ← (a[i][j]·pivot − a[i][k]·a[k][j]) / prev_pivot,
    // with exact division guaranteed.
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    BigRational::new(sign * a[n - 1][n - 1].clone(), scale)
}

/// Symbolic determinant by memoized cofactor expansion along the first
/// remaining row. Capped at size 7 — factorial blowup beyond that.
pub fn symbolic_determinant<C: Coeff>(m: &PolyMatrix<C>) -> Polynomial<C> {
    let n = m.size();
    assert!(n <= 7, "cofactor determinant capped at size 7, got {n}");
    // memo key: bitmask of remaining columns; the remaining rows are always
    // the last popcount(mask) rows.
    let mut memo: BTreeMap<u32, Polynomial<C>> = BTreeMap::new();
    fn go<C: Coeff>(
        m: &PolyMatrix<C>,
        n: usize,
        cols: u32,
        memo: &mut BTreeMap<u32, Polynomial<C>>,
    ) -> Polynomial<C> {
        if cols == 0 {
            return Polynomial::one();
        }
        if let Some(hit) = memo.get(&cols) {
            return hit.clone();
        }
        let row = n - cols.count_ones() as usize;
        let mut acc = Polynomial::zero();
        let mut sign_pos = true;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = m.get(row, j);
            if !entry.is_zero() {
                let sub = go(m, n, cols & !(1 << j), memo);
                let term = entry.mul(&sub);
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, n, (1u32 << n) - 1, &mut memo)
}

/// Symbolic determinant by fraction-free elimination over the polynomial
/// ring, using exact division. No size cap; used where cofactor expansion
/// is too large.
pub fn bareiss_symbolic_determinant<C: Coeff>(m: &PolyMatrix<C>) -> Polynomial<C> {
    let n = m.size();
    if n == 0 {
        return Polynomial::one();
    }
    let mut a: Vec<Vec<Polynomial<C>>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut negate = false;
    let mut prev = Polynomial::<C>::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .try_exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            a[i][k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// The tope set of a diagram computed naively: each of the `2^n` sign
/// vectors is kept iff it is consistent with the wire order in some slab,
/// i.e. reading its signs bottom-to-top in that slab gives `+`s then `-`s.
pub fn naive_regions(w: &WiringDiagram) -> BTreeSet<Tope> {
    assert!(w.n <= 12);
    let perms = w.perms();
    let mut out = BTreeSet::new();
    for bits in 0u32..(1 << w.n) {
        let signs: Vec<i8> = (0..w.n)
            .map(|a| if bits & (1 << a) != 0 { 1 } else { -1 })
            .collect();
        let ok = perms.iter().any(|perm| {
            let mut seen_minus = false;
            for &wire in perm {
                // a region lies above the wires signed + and below those
                // signed −, so bottom-to-top the signs must be sorted
                if signs[wire] > 0 {
                    if seen_minus {
                        return false;
                    }
                } else {
                    seen_minus = true;
                }
            }
            true
        });
        if ok {
            out.insert(Tope { signs });
        }
    }
    out
}

/// Fingerprint used for corpus deduplication: the sorted tope strings of
/// `naive_regions`, joined by `;`.
pub fn tope_fingerprint(w: &WiringDiagram) -> String {
    let topes: Vec<String> = naive_regions(w).iter().map(|t| t.to_string()).collect();
    topes.join(";")
}

/// All valid wiring diagrams with `n` wires and at most `max_events`
/// events, deduplicated by tope fingerprint. With `allow_degenerate` false
/// only simple (size-2) events are generated.
pub fn enumerate_diagrams(
    n: usize,
    max_events: usize,
    allow_degenerate: bool,
) -> Vec<WiringDiagram> {
    assert!(n <= 6, "corpus generation is capped at 6 wires");
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut events: Vec<Event> = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut crossed: BTreeSet<(usize, usize)> = BTreeSet::new();

    fn dfs(
        n: usize,
        max_events: usize,
        allow_degenerate: bool,
        events: &mut Vec<Event>,
        perm: &mut Vec<usize>,
        crossed: &mut BTreeSet<(usize, usize)>,
        seen: &mut BTreeSet<String>,
        out: &mut Vec<WiringDiagram>,
    ) {
        let w = WiringDiagram {
            n,
            events: events.clone(),
        };
        if seen.insert(tope_fingerprint(&w)) {
            out.push(w);
        }
        if events.len() == max_events {
            return;
        }
        let max_size = if allow_degenerate { n } else { 2 };
        for size in 2..=max_size {
            for bottom in 1..=n + 1 - size {
                let b0 = bottom - 1;
                let block = &perm[b0..b0 + size];
                let mut pairs = Vec::new();
                let mut ok = true;
                'outer: for i in 0..size {
                    for j in i + 1..size {
                        let p = (block[i].min(block[j]), block[i].max(block[j]));
                        if crossed.contains(&p) {
                            ok = false;
                            break 'outer;
                        }
                        pairs.push(p);
                    }
                }
                if !ok {
                    continue;
                }
                for &p in &pairs {
                    crossed.insert(p);
                }
                perm[b0..b0 + size].reverse();
                events.push(Event { bottom, size });
                dfs(n, max_events, allow_degenerate, events, perm, crossed, seen, out);
                events.pop();
                perm[b0..b0 + size].reverse();
                for p in &pairs {
                    crossed.remove(p);
                }
            }
        }
    }
    dfs(
        n,
        max_events,
        allow_degenerate,
        &mut events,
        &mut perm,
        &mut crossed,
        &mut seen,
        &mut out,
    );
    out
}

/// A seeded rational assignment with numerators and denominators in
/// `[2, 97]`.
pub fn seeded_assignment(n: usize, seed: u64) -> BTreeMap<VariableId, BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=n as u32)
        .map(|i| {
            let num: i64 = rng.gen_range(2..=97);
            let den: i64 = rng.gen_range(2..=97);
            (VariableId(i), BigRational::new(num.into(), den.into()))
        })
        .collect()
}

/// A seeded assignment at which none of the given polynomials vanishes,
/// found by retrying successive seeds. Used to keep determinant comparisons
/// away from roots of the `1 − x_M` factors.
pub fn nonsingular_assignment<C: Coeff>(
    n: usize,
    seed: u64,
    avoid: &[Polynomial<C>],
) -> BTreeMap<VariableId, BigRational> {
    for attempt in 0..1000 {
        let a = seeded_assignment(n, seed.wrapping_add(attempt));
        let singular = avoid
            .iter()
            .any(|p| p.evaluate(&a).map(|v| v.is_zero()).unwrap_or(false));
        if !singular {
            return a;
        }
    }
    panic!("no nonsingular assignment found after 1000 attempts");
}
