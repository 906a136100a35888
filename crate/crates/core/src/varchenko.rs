//! The Varchenko matrix and the closed forms built from it:
//! predicted diagonal entries, leftover matrices `L^n` at degenerate points,
//! their determinants, and the global determinant formula.

use std::fmt;

use crate::arrangement::{ElementKind, LineId, PosetElement, Tope};
use crate::error::ReductionError;
use crate::poly::{Coeff, Monomial, Polynomial, VariableId};

/// Assigns one weight variable to each line of an `n`-line context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    vars: Vec<VariableId>,
}

impl WeightAssignment {
    /// The standard assignment: line `a` (0-based) gets `x_{a+1}`.
    pub fn standard(n: usize) -> Self {
        WeightAssignment {
            vars: (1..=n as u32).map(VariableId).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, line: LineId) -> VariableId {
        self.vars[line]
    }
}

/// A dense square matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix<C: Coeff> {
    size: usize,
    entries: Vec<Polynomial<C>>,
}

impl<C: Coeff> PolyMatrix<C> {
    pub fn zero(size: usize) -> Self {
        PolyMatrix {
            size,
            entries: vec![Polynomial::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.set(i, i, Polynomial::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<C> {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<C>) {
        self.entries[i * self.size + j] = p;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reorders rows and columns simultaneously: entry `(i,j)` of the result
    /// is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.size);
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                out.set(i, j, self.get(perm[i], perm[j]).clone());
            }
        }
        out
    }

    /// Human-readable aligned grid of rendered polynomials.
    pub fn render_grid(&self) -> String {
        let rendered: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        let mut widths = vec![0usize; self.size];
        for i in 0..self.size {
            for j in 0..self.size {
                widths[j] = widths[j].max(rendered[i * self.size + j].chars().count());
            }
        }
        let mut out = String::new();
        for i in 0..self.size {
            for j in 0..self.size {
                let cell = &rendered[i * self.size + j];
                if j > 0 {
                    out.push_str("  ");
                }
                out.push_str(cell);
                if j + 1 < self.size {
                    for _ in cell.chars().count()..widths[j] {
                        out.push(' ');
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable form: header `matrix <r>`, then one line
    /// `i j <polynomial>` per nonzero entry, row-major, 0-based.
    pub fn render_entries(&self) -> String {
        let mut out = format!("matrix {}\n", self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                let p = self.get(i, j);
                if !p.is_zero() {
                    out.push_str(&format!("{i} {j} {p}\n"));
                }
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for PolyMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_grid())
    }
}

/// The Varchenko matrix of a tope set: entry `(i,j)` is the product of the
/// weights of the elements separating tope `i` from tope `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarchenkoMatrix<C: Coeff> {
    pub topes: Vec<Tope>,
    pub matrix: PolyMatrix<C>,
}

pub fn varchenko_matrix<C: Coeff>(
    topes: &[Tope],
    weights: &WeightAssignment,
) -> Result<VarchenkoMatrix<C>, ReductionError> {
    for i in 0..topes.len() {
        assert_eq!(topes[i].len(), weights.n(), "tope length vs weight count");
        for j in i + 1..topes.len() {
            if topes[i] == topes[j] {
                return Err(ReductionError::DuplicateTopes(i, j));
            }
        }
    }
    let r = topes.len();
    let mut m = PolyMatrix::zero(r);
    for i in 0..r {
        for j in 0..r {
            let mono = Monomial::from_pairs(
                topes[i]
                    .signs
                    .iter()
                    .zip(&topes[j].signs)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(a, _)| (weights.var(a), 1)),
            );
            m.set(i, j, Polynomial::monomial(mono, C::one()));
        }
    }
    Ok(VarchenkoMatrix {
        topes: topes.to_vec(),
        matrix: m,
    })
}

/// The product `∏_{a∈B}(1−x_a²)` attached to a poset element with line set
/// `B`: 1 for the plane, `1−x_a²` for a line, the full product for a point.
pub fn element_product<C: Coeff>(
    elem: &PosetElement,
    weights: &WeightAssignment,
) -> Polynomial<C> {
    elem.lines_through
        .iter()
        .map(|&a| Polynomial::one_minus_square([weights.var(a)]))
        .fold(Polynomial::one(), |acc, f| acc.mul(&f))
}

/// One predicted diagonal entry per poset element, in poset order. For a
/// semigeneral arrangement this is the full diagonal of the reduced matrix;
/// in general it covers the nondegenerate elements.
pub fn predicted_diagonal_entries<C: Coeff>(
    poset: &[PosetElement],
    weights: &WeightAssignment,
) -> Vec<Polynomial<C>> {
    poset.iter().map(|e| element_product(e, weights)).collect()
}

/// The leftover matrix `L^n` at a degenerate point of multiplicity `n`,
/// in the given variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftoverMatrix<C: Coeff> {
    pub n: usize,
    pub variable_order: Vec<VariableId>,
    pub matrix: PolyMatrix<C>,
}

/// Builds `L^n`: the `(n−1)×(n−1)` symmetric matrix with
/// `L_{i,i+j} = x_{i+1}···x_{i+j} · (1−x_1²···x_i²)(1−x_{i+j+1}²···x_n²)`.
pub fn leftover_matrix<C: Coeff>(n: usize, vars: &[VariableId]) -> LeftoverMatrix<C> {
    assert!(n >= 3, "leftover matrices need multiplicity at least 3");
    assert_eq!(vars.len(), n);
    let mut m = PolyMatrix::zero(n - 1);
    // 1-based row index i and column index i+j of the closed form.
    for i in 1..n {
        for c in i..n {
            let prefix = Polynomial::product_of_vars(vars[i..c].iter().copied());
            let low = Polynomial::<C>::one_minus_square(vars[..i].iter().copied());
            let high = Polynomial::<C>::one_minus_square(vars[c..].iter().copied());
            let entry = prefix.mul(&low).mul(&high);
            m.set(i - 1, c - 1, entry.clone());
            m.set(c - 1, i - 1, entry);
        }
    }
    LeftoverMatrix {
        n,
        variable_order: vars.to_vec(),
        matrix: m,
    }
}

/// Closed form of `det(L^n)`: `∏(1−x_i²) · (1−x_1²···x_n²)^{n−2}`.
pub fn leftover_determinant<C: Coeff>(n: usize, vars: &[VariableId]) -> Polynomial<C> {
    assert!(n >= 3);
    assert_eq!(vars.len(), n);
    let product = vars
        .iter()
        .map(|&v| Polynomial::one_minus_square([v]))
        .fold(Polynomial::<C>::one(), |acc, f| acc.mul(&f));
    let all = Polynomial::<C>::one_minus_square(vars.iter().copied());
    product.mul(&all.pow(n as u32 - 2))
}

/// The global determinant formula: `det(V) = ∏_M (1−x_M)^{l(M)}` over the
/// intersection poset, where `x_M` is the product of the squared weights of
/// the lines through `M`, and the exponent `l(M)` is: 0 for the plane,
/// 1 + (points on the line) for a line, 0 for a nondegenerate point, and
/// multiplicity − 2 for a degenerate point.
pub fn varchenko_determinant_formula<C: Coeff>(
    poset: &[PosetElement],
    weights: &WeightAssignment,
) -> Polynomial<C> {
    determinant_formula_factors(poset, weights)
        .into_iter()
        .fold(Polynomial::one(), |acc, (f, e): (Polynomial<C>, _)| {
            acc.mul(&f.pow(e))
        })
}

/// The determinant formula as a list of `(1 − x_M, exponent)` factors,
/// without expansion. Exponents grow with the point count, so the expanded
/// polynomial can be enormous while this form stays small; oracles should
/// evaluate it factor by factor.
pub fn determinant_formula_factors<C: Coeff>(
    poset: &[PosetElement],
    weights: &WeightAssignment,
) -> Vec<(Polynomial<C>, u32)> {
    let mut out = Vec::new();
    for elem in poset {
        let exponent = match elem.kind {
            ElementKind::Plane => 0,
            ElementKind::Line(a) => {
                1 + poset
                    .iter()
                    .filter(|e| {
                        matches!(e.kind, ElementKind::Point(_)) && e.lines_through.contains(&a)
                    })
                    .count()
            }
            ElementKind::Point(_) => elem.lines_through.len().saturating_sub(2),
        };
        if exponent == 0 {
            continue;
        }
        let factor =
            Polynomial::<C>::one_minus_square(elem.lines_through.iter().map(|&a| weights.var(a)));
        out.push((factor, exponent as u32));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{
        enumerate_regions, intersection_poset, parse_wiring_diagram, separation_set,
        WiringDiagram,
    };
    use crate::Poly;
    use std::collections::BTreeSet;

    fn v(i: u32) -> VariableId {
        VariableId(i)
    }

    fn topes_of(text: &str) -> Vec<Tope> {
        enumerate_regions(&parse_wiring_diagram(text).unwrap())
            .regions
            .into_iter()
            .map(|r| r.tope)
            .collect()
    }

    fn sorted_strings<C: Coeff>(ps: &[Polynomial<C>]) -> Vec<String> {
        let mut out: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn single_line_matrix() {
        let topes = topes_of("wires 1\n");
        let vm = varchenko_matrix::<crate::Int>(&topes, &WeightAssignment::standard(1)).unwrap();
        assert_eq!(vm.matrix.get(0, 0), &Poly::one());
        assert_eq!(vm.matrix.get(0, 1), &Poly::var(v(1)));
        assert_eq!(vm.matrix.get(1, 0), &Poly::var(v(1)));
        assert_eq!(vm.matrix.get(1, 1), &Poly::one());
    }

    #[test]
    fn two_crossing_lines_matrix() {
        let topes = topes_of("wires 2\nevent 1 2\n");
        let vm = varchenko_matrix::<crate::Int>(&topes, &WeightAssignment::standard(2)).unwrap();
        assert!(vm.matrix.is_symmetric());
        // every entry is determined by the separation pattern
        for i in 0..4 {
            assert_eq!(vm.matrix.get(i, i), &Poly::one());
            for j in 0..4 {
                let sep = separation_set(&topes[i], &topes[j]).unwrap();
                let expect = Poly::product_of_vars(sep.iter().map(|&a| v(a as u32 + 1)));
                assert_eq!(vm.matrix.get(i, j), &expect);
            }
        }
        // the three off-diagonal values are x1, x2, x1*x2
        let vals: BTreeSet<String> = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| vm.matrix.get(i, j).to_string())
            .collect();
        assert_eq!(
            vals,
            BTreeSet::from(["x1".to_string(), "x2".to_string(), "x1*x2".to_string()])
        );
    }

    #[test]
    fn three_basic_opposite_regions() {
        let topes = topes_of("wires 3\nevent 1 3\n");
        let vm = varchenko_matrix::<crate::Int>(&topes, &WeightAssignment::standard(3)).unwrap();
        let full = Poly::product_of_vars([v(1), v(2), v(3)]);
        for i in 0..6 {
            for j in 0..6 {
                let expected_full = topes[i] == topes[j].negated();
                assert_eq!(vm.matrix.get(i, j) == &full, expected_full);
            }
        }
    }

    #[test]
    fn duplicate_topes_rejected() {
        let topes = vec![
            Tope { signs: vec![1, 1] },
            Tope { signs: vec![1, 1] },
        ];
        let err = varchenko_matrix::<crate::Int>(&topes, &WeightAssignment::standard(2));
        assert!(matches!(err, Err(ReductionError::DuplicateTopes(0, 1))));
    }

    #[test]
    fn triangle_relation() {
        let topes = topes_of("wires 3\nevent 1 2\nevent 2 2\nevent 1 2\n");
        for a in &topes {
            for b in &topes {
                for c in &topes {
                    let ac = separation_set(a, c).unwrap();
                    let ab = separation_set(a, b).unwrap();
                    let bc = separation_set(b, c).unwrap();
                    let sym: BTreeSet<_> = ab.symmetric_difference(&bc).copied().collect();
                    assert_eq!(ac, sym);
                }
            }
        }
    }

    #[test]
    fn predicted_diagonal_two_crossing_lines() {
        let w = parse_wiring_diagram("wires 2\nevent 1 2\n").unwrap();
        let poset = intersection_poset(&w);
        let entries =
            predicted_diagonal_entries::<crate::Int>(&poset, &WeightAssignment::standard(2));
        let x1 = Poly::one_minus_square([v(1)]);
        let x2 = Poly::one_minus_square([v(2)]);
        assert_eq!(
            sorted_strings(&entries),
            sorted_strings(&[Poly::one(), x1.clone(), x2.clone(), x1.mul(&x2)])
        );
    }

    #[test]
    fn leftover_l3_closed_form() {
        let l = leftover_matrix::<crate::Int>(3, &[v(1), v(2), v(3)]);
        let e = |s: &[u32], t: &[u32], mid: &[u32]| {
            Poly::product_of_vars(mid.iter().map(|&i| v(i)))
                .mul(&Poly::one_minus_square(s.iter().map(|&i| v(i))))
                .mul(&Poly::one_minus_square(t.iter().map(|&i| v(i))))
        };
        assert_eq!(l.matrix.get(0, 0), &e(&[1], &[2, 3], &[]));
        assert_eq!(l.matrix.get(0, 1), &e(&[1], &[3], &[2]));
        assert_eq!(l.matrix.get(1, 0), &e(&[1], &[3], &[2]));
        assert_eq!(l.matrix.get(1, 1), &e(&[1, 2], &[3], &[]));
    }

    #[test]
    fn leftover_l4_middle_entry() {
        let l = leftover_matrix::<crate::Int>(4, &[v(1), v(2), v(3), v(4)]);
        let expect = Poly::one_minus_square([v(1), v(2)]).mul(&Poly::one_minus_square([v(3), v(4)]));
        assert_eq!(l.matrix.get(1, 1), &expect);
        assert!(l.matrix.is_symmetric());
    }

    #[test]
    fn leftover_determinant_n3() {
        let det = leftover_determinant::<crate::Int>(3, &[v(1), v(2), v(3)]);
        let expect = Poly::one_minus_square([v(1)])
            .mul(&Poly::one_minus_square([v(2)]))
            .mul(&Poly::one_minus_square([v(3)]))
            .mul(&Poly::one_minus_square([v(1), v(2), v(3)]));
        assert_eq!(det, expect);
    }

    #[test]
    fn determinant_formula_small_cases() {
        // two crossing lines: (1−x1²)²(1−x2²)²
        let w = parse_wiring_diagram("wires 2\nevent 1 2\n").unwrap();
        let det = varchenko_determinant_formula::<crate::Int>(
            &intersection_poset(&w),
            &WeightAssignment::standard(2),
        );
        let expect = Poly::one_minus_square([v(1)])
            .pow(2)
            .mul(&Poly::one_minus_square([v(2)]).pow(2));
        assert_eq!(det, expect);

        // n-basic: ∏(1−xᵢ²)²·(1−x1²···xn²)^{n−2}
        for n in 3..=5usize {
            let w = WiringDiagram::n_basic(n);
            let det = varchenko_determinant_formula::<crate::Int>(
                &intersection_poset(&w),
                &WeightAssignment::standard(n),
            );
            let vars: Vec<VariableId> = (1..=n as u32).map(v).collect();
            let mut expect = Poly::one_minus_square(vars.iter().copied()).pow(n as u32 - 2);
            for &x in &vars {
                expect = expect.mul(&Poly::one_minus_square([x]).pow(2));
            }
            assert_eq!(det, expect);
        }
    }

    #[test]
    fn entry_format_round_shape() {
        let topes = topes_of("wires 2\nevent 1 2\n");
        let vm = varchenko_matrix::<crate::Int>(&topes, &WeightAssignment::standard(2)).unwrap();
        let text = vm.matrix.render_entries();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("matrix 4"));
        assert_eq!(lines.count(), 16); // all Varchenko entries are nonzero
    }
}
