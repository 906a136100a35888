//! The constructive reduction pipeline: encompassing, good numberings,
//! the symmetric elimination producing a block diagonal form, the closed
//! form for reduced entries, and the verification harness.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::One;

use crate::arrangement::{
    ElementKind, Geometry, LineCell, PointId, PosetElement, RegionId,
};
use crate::error::ReductionError;
use crate::oracle::{brute_determinant, seeded_assignment, symbolic_determinant};
use crate::poly::{Coeff, Monomial, Polynomial, VariableId};
use crate::varchenko::{
    element_product, leftover_matrix, varchenko_determinant_formula, LeftoverMatrix, PolyMatrix,
    VarchenkoMatrix, WeightAssignment,
};

/// A run of consecutive numbering positions holding the cone regions of one
/// degenerate point; it becomes a leftover block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpan {
    pub start: usize,
    pub len: usize,
    pub point: PointId,
}

/// A good numbering of the regions: each scalar position encompasses exactly
/// one new poset element; each degenerate point's cone regions occupy one
/// consecutive block span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Numbering {
    pub order: Vec<RegionId>,
    /// Poset element index first encompassed at each position; `None` for
    /// all block-span positions except the last, which carries the point.
    pub new_element: Vec<Option<usize>>,
    pub block_spans: Vec<BlockSpan>,
}

impl Numbering {
    fn span_at(&self, position: usize) -> Option<&BlockSpan> {
        self.block_spans
            .iter()
            .find(|s| position >= s.start && position < s.start + s.len)
    }
}

/// Whether a region set encompasses a poset element: the plane needs any
/// region; a line needs one edge with both flanking regions in the set; a
/// point needs all its corner regions.
pub fn encompasses(regions: &BTreeSet<RegionId>, elem: &PosetElement, geom: &Geometry) -> bool {
    match elem.kind {
        ElementKind::Plane => !regions.is_empty(),
        ElementKind::Line(l) => geom.line_cells[l].iter().any(|c| match c {
            LineCell::Edge { below, above } => regions.contains(below) && regions.contains(above),
            LineCell::Vertex(_) => false,
        }),
        ElementKind::Point(j) => geom.corners[j].iter().all(|r| regions.contains(r)),
    }
}

struct Search<'a> {
    geom: &'a Geometry,
    poset: &'a [PosetElement],
    /// region -> Some(point) if it is a cone region reserved for a span
    reserved: Vec<Option<PointId>>,
    used: Vec<bool>,
    encompassed: Vec<bool>,
    order: Vec<RegionId>,
    new_element: Vec<Option<usize>>,
    block_spans: Vec<BlockSpan>,
}

impl<'a> Search<'a> {
    fn point_element(&self, j: PointId) -> usize {
        1 + self.geom.diagram.n + j
    }

    /// Elements newly encompassed if `r` joins the prefix.
    fn delta(&self, r: RegionId) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.encompassed[0] {
            out.push(0);
        }
        let mut lines_seen = BTreeSet::new();
        for &(nb, l) in &self.geom.regions[r].adjacency {
            if self.used[nb] && !self.encompassed[1 + l] && lines_seen.insert(l) {
                out.push(1 + l);
            }
        }
        for &j in &self.geom.regions[r].incident_points {
            let e = self.point_element(j);
            if !self.encompassed[e]
                && self.geom.corners[j].iter().all(|&c| c == r || self.used[c])
            {
                out.push(e);
            }
        }
        out
    }

    /// Cone-first condition: when a region first encompasses an element, it must be
    /// the first region of the prefix inside its cone at that element.
    fn cone_first_ok(&self, r: RegionId, elem: usize) -> bool {
        let lines = &self.poset[elem].lines_through;
        if lines.is_empty() {
            return self.order.is_empty(); // the plane: first region overall
        }
        let label = self.geom.tope(r).restrict(lines);
        self.order
            .iter()
            .all(|&q| self.geom.tope(q).restrict(lines) != label)
    }

    /// Contiguity condition: the encompassed edges of each affected line stay
    /// contiguous along the wire.
    fn contiguity_ok(&self, r: RegionId) -> bool {
        let would_use = |x: RegionId| x == r || self.used[x];
        let affected: BTreeSet<usize> = self.geom.regions[r]
            .adjacency
            .iter()
            .filter(|(nb, _)| self.used[*nb])
            .map(|&(_, l)| l)
            .collect();
        affected.iter().all(|&l| {
            let mut indices = Vec::new();
            let mut idx = 0usize;
            for cell in &self.geom.line_cells[l] {
                if let LineCell::Edge { below, above } = cell {
                    if would_use(*below) && would_use(*above) {
                        indices.push(idx);
                    }
                    idx += 1;
                }
            }
            match (indices.first(), indices.last()) {
                (Some(&a), Some(&b)) => b - a + 1 == indices.len(),
                _ => true,
            }
        })
    }

    fn adjacent_to_prefix(&self, r: RegionId) -> bool {
        self.order.is_empty()
            || self.geom.regions[r]
                .adjacency
                .iter()
                .any(|&(nb, _)| self.used[nb])
    }

    fn push(&mut self, r: RegionId, elem: Option<usize>) {
        self.used[r] = true;
        self.order.push(r);
        self.new_element.push(elem);
        if let Some(e) = elem {
            self.encompassed[e] = true;
        }
    }

    fn pop(&mut self) {
        let r = self.order.pop().unwrap();
        self.used[r] = false;
        if let Some(e) = self.new_element.pop().unwrap() {
            self.encompassed[e] = false;
        }
    }

    fn solve(&mut self) -> bool {
        if self.order.len() == self.geom.num_regions() {
            return self.encompassed.iter().all(|&e| e);
        }
        // scalar moves, in sweep (region id) order
        for r in 0..self.geom.num_regions() {
            if self.used[r] || self.reserved[r].is_some() || !self.adjacent_to_prefix(r) {
                continue;
            }
            let delta = self.delta(r);
            if delta.len() != 1 {
                continue;
            }
            let elem = delta[0];
            if matches!(self.poset[elem].kind, ElementKind::Point(j) if self.geom.diagram.events[j].size >= 3)
            {
                continue; // degenerate points are only completed by spans
            }
            if !self.cone_first_ok(r, elem) || !self.contiguity_ok(r) {
                continue;
            }
            self.push(r, Some(elem));
            if self.solve() {
                return true;
            }
            self.pop();
        }
        // span moves: all cone regions of a degenerate point, ascending or
        // descending
        for j in self.geom.diagram.degenerate_events() {
            let elem = self.point_element(j);
            if self.encompassed[elem] {
                continue;
            }
            let cone = self.geom.cone_regions(j);
            if cone.iter().any(|&c| self.used[c]) {
                continue;
            }
            // every non-cone corner must already be numbered
            if !self.geom.corners[j]
                .iter()
                .all(|&c| cone.contains(&c) || self.used[c])
            {
                continue;
            }
            for dir in [false, true] {
                let seq: Vec<RegionId> = if dir {
                    cone.iter().rev().copied().collect()
                } else {
                    cone.clone()
                };
                if !self.adjacent_to_prefix(seq[0]) {
                    continue;
                }
                let start = self.order.len();
                let mut placed = 0usize;
                let mut ok = true;
                for (i, &r) in seq.iter().enumerate() {
                    let last = i + 1 == seq.len();
                    let delta = self.delta(r);
                    let legal = if last {
                        delta == vec![elem]
                    } else {
                        delta.is_empty()
                    };
                    if !legal {
                        ok = false;
                        break;
                    }
                    self.push(r, if last { Some(elem) } else { None });
                    placed += 1;
                }
                if ok {
                    self.block_spans.push(BlockSpan {
                        start,
                        len: seq.len(),
                        point: j,
                    });
                    if self.solve() {
                        return true;
                    }
                    self.block_spans.pop();
                }
                for _ in 0..placed {
                    self.pop();
                }
            }
        }
        false
    }
}

/// Finds a good numbering by backtracking search seeded with the sweep
/// order, then re-validates it independently.
pub fn good_numbering(
    geom: &Geometry,
    poset: &[PosetElement],
) -> Result<Numbering, ReductionError> {
    let total = geom.num_regions();
    let mut reserved = vec![None; total];
    for j in geom.diagram.degenerate_events() {
        for c in geom.cone_regions(j) {
            reserved[c] = Some(j);
        }
    }
    let mut search = Search {
        geom,
        poset,
        reserved,
        used: vec![false; total],
        encompassed: vec![false; poset.len()],
        order: Vec::with_capacity(total),
        new_element: Vec::with_capacity(total),
        block_spans: Vec::new(),
    };
    if !search.solve() {
        return Err(ReductionError::NumberingNotFound);
    }
    let numbering = Numbering {
        order: search.order,
        new_element: search.new_element,
        block_spans: search.block_spans,
    };
    validate_numbering(geom, poset, &numbering)?;
    Ok(numbering)
}

/// Independent re-validation of the four good-numbering conditions plus the
/// block-span rules. Run on every emitted numbering.
pub fn validate_numbering(
    geom: &Geometry,
    poset: &[PosetElement],
    numbering: &Numbering,
) -> Result<(), ReductionError> {
    let fail = |msg: String| Err(ReductionError::InvalidNumbering(msg));
    let total = geom.num_regions();
    if numbering.order.len() != total {
        return fail("order is not a permutation of the regions".into());
    }
    let mut seen = vec![false; total];
    for &r in &numbering.order {
        if seen[r] {
            return fail(format!("region {r} appears twice"));
        }
        seen[r] = true;
    }

    let mut prefix: BTreeSet<RegionId> = BTreeSet::new();
    let mut encompassed = vec![false; poset.len()];
    for (k, &r) in numbering.order.iter().enumerate() {
        // prefix connectivity
        if k > 0
            && !geom.regions[r]
                .adjacency
                .iter()
                .any(|(nb, _)| prefix.contains(nb))
        {
            return fail(format!("position {k} is not adjacent to the prefix"));
        }
        prefix.insert(r);
        let mut delta = Vec::new();
        for (e, elem) in poset.iter().enumerate() {
            if !encompassed[e] && encompasses(&prefix, elem, geom) {
                encompassed[e] = true;
                delta.push(e);
            }
        }
        let in_span = numbering.span_at(k);
        match in_span {
            None => {
                if delta.len() != 1 || numbering.new_element[k] != Some(delta[0]) {
                    return fail(format!(
                        "position {k} encompasses {} new elements, expected exactly one",
                        delta.len()
                    ));
                }
                // cone-first
                let lines = &poset[delta[0]].lines_through;
                if !lines.is_empty() {
                    let label = geom.tope(r).restrict(lines);
                    for &q in &numbering.order[..k] {
                        if geom.tope(q).restrict(lines) == label {
                            return fail(format!(
                                "position {k} is not the first region in its cone at {}",
                                poset[delta[0]].label()
                            ));
                        }
                    }
                }
            }
            Some(span) => {
                let expected = if k + 1 == span.start + span.len {
                    vec![1 + geom.diagram.n + span.point]
                } else {
                    vec![]
                };
                if delta != expected {
                    return fail(format!("span position {k} encompasses the wrong elements"));
                }
                if !geom.regions[r].incident_points.contains(&span.point) {
                    return fail(format!("span position {k} is not cornered at its point"));
                }
            }
        }
        // per-line contiguity at every prefix
        for l in 0..geom.diagram.n {
            let mut indices = Vec::new();
            let mut idx = 0usize;
            for cell in &geom.line_cells[l] {
                if let LineCell::Edge { below, above } = cell {
                    if prefix.contains(below) && prefix.contains(above) {
                        indices.push(idx);
                    }
                    idx += 1;
                }
            }
            if let (Some(&a), Some(&b)) = (indices.first(), indices.last()) {
                if b - a + 1 != indices.len() {
                    return fail(format!(
                        "encompassed edges of line {} are not contiguous at prefix {}",
                        l + 1,
                        k
                    ));
                }
            }
        }
    }
    if let Some(e) = encompassed.iter().position(|&x| !x) {
        return fail(format!("element {} never encompassed", poset[e].label()));
    }
    Ok(())
}

/// `l_i(m,n)`: the product of the weights of the lines separating region
/// (position) `i` simultaneously from positions `m` and `n`.
pub fn l_product<C: Coeff>(
    geom: &Geometry,
    weights: &WeightAssignment,
    numbering: &Numbering,
    i: usize,
    m: usize,
    n: usize,
) -> Polynomial<C> {
    let ti = geom.tope(numbering.order[i]);
    let tm = geom.tope(numbering.order[m]);
    let tn = geom.tope(numbering.order[n]);
    let mono = Monomial::from_pairs((0..geom.diagram.n).filter_map(|a| {
        let s = ti.signs[a];
        (s != tm.signs[a] && s != tn.signs[a]).then_some((weights.var(a), 1))
    }));
    Polynomial::monomial(mono, C::one())
}

/// The closed form of the entry at positions `(m,n)` after
/// the first `k` positions have been eliminated:
/// `V_{m,n} · φ(∏_{i<k}(1 − l_i(m,n)²))`. Requires `m ≥ k` or `n ≥ k`.
/// All positions are 0-based numbering positions.
pub fn reduced_entry_closed_form<C: Coeff>(
    geom: &Geometry,
    weights: &WeightAssignment,
    vm: &VarchenkoMatrix<C>,
    numbering: &Numbering,
    k: usize,
    m: usize,
    n: usize,
) -> Polynomial<C> {
    assert!(m >= k || n >= k, "closed form requires an uneliminated index");
    let base = vm
        .matrix
        .get(numbering.order[m], numbering.order[n])
        .clone();
    let mut acc = Polynomial::<C>::one();
    for i in 0..k {
        let l = l_product::<C>(geom, weights, numbering, i, m, n);
        let factor = Polynomial::one().sub(&l.mul(&l));
        acc = acc.mul(&factor).phi();
    }
    base.mul(&acc).phi()
}

/// One recorded symmetric elimination step: `μ × row/column `pivot` was
/// subtracted from row/column `target` (numbering positions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimOp<C: Coeff> {
    pub pivot: usize,
    pub target: usize,
    pub multiplier: Polynomial<C>,
}

/// The operations applied plus the accumulated transformation matrices:
/// `left · permuted_input · right = final`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace<C: Coeff> {
    pub ops: Vec<ElimOp<C>>,
    pub left: PolyMatrix<C>,
    pub right: PolyMatrix<C>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block<C: Coeff> {
    Scalar {
        position: usize,
        element: usize,
        label: String,
        value: Polynomial<C>,
    },
    Leftover {
        span: BlockSpan,
        label: String,
        matrix: LeftoverMatrix<C>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDiagonalForm<C: Coeff> {
    pub numbering: Numbering,
    /// The Varchenko matrix permuted into numbering order — the matrix the
    /// trace transforms.
    pub permuted_input: PolyMatrix<C>,
    pub final_matrix: PolyMatrix<C>,
    pub blocks: Vec<Block<C>>,
    pub trace: ReductionTrace<C>,
}

impl<C: Coeff> BlockDiagonalForm<C> {
    /// The external block output format: `blocks <count>`, then per block
    /// either a `scalar` line or a `block` header plus matrix entries.
    pub fn render(&self) -> String {
        let mut out = format!("blocks {}\n", self.blocks.len());
        for b in &self.blocks {
            match b {
                Block::Scalar { value, label, .. } => {
                    out.push_str(&format!("scalar {value} # {label}\n"));
                }
                Block::Leftover { span, label, matrix } => {
                    out.push_str(&format!("block {} {label}\n", span.len));
                    out.push_str(&matrix.matrix.render_entries());
                }
            }
        }
        out
    }
}

fn row_op<C: Coeff>(m: &mut PolyMatrix<C>, target: usize, pivot: usize, mu: &Polynomial<C>) {
    for c in 0..m.size() {
        let v = m.get(target, c).sub(&mu.mul(m.get(pivot, c)));
        m.set(target, c, v);
    }
}

fn col_op<C: Coeff>(m: &mut PolyMatrix<C>, target: usize, pivot: usize, mu: &Polynomial<C>) {
    for r in 0..m.size() {
        let v = m.get(r, target).sub(&mu.mul(m.get(r, pivot)));
        m.set(r, target, v);
    }
}

fn eliminate_core<C: Coeff>(
    geom: &Geometry,
    poset: &[PosetElement],
    weights: &WeightAssignment,
    vm: &VarchenkoMatrix<C>,
    numbering: &Numbering,
    mut on_checkpoint: impl FnMut(usize, &PolyMatrix<C>),
) -> Result<BlockDiagonalForm<C>, ReductionError> {
    let r = numbering.order.len();
    let permuted = vm.matrix.permuted(&numbering.order);
    let mut w = permuted.clone();
    let mut left = PolyMatrix::<C>::identity(r);
    let mut right = PolyMatrix::<C>::identity(r);
    let mut ops: Vec<ElimOp<C>> = Vec::new();

    let apply = |w: &mut PolyMatrix<C>,
                     left: &mut PolyMatrix<C>,
                     right: &mut PolyMatrix<C>,
                     ops: &mut Vec<ElimOp<C>>,
                     target: usize,
                     pivot: usize,
                     mu: Polynomial<C>| {
        if mu.is_zero() {
            return;
        }
        row_op(w, target, pivot, &mu);
        row_op(left, target, pivot, &mu);
        col_op(w, target, pivot, &mu);
        col_op(right, target, pivot, &mu);
        ops.push(ElimOp {
            pivot,
            target,
            multiplier: mu,
        });
    };

    let mut pos = 0usize;
    while pos < r {
        if let Some(span) = numbering
            .block_spans
            .iter()
            .find(|s| s.start == pos)
            .copied()
        {
            let lines = poset[1 + geom.diagram.n + span.point].lines_through.clone();
            let span_end = span.start + span.len;
            for j in span_end..r {
                let label_j = geom.tope(numbering.order[j]).restrict(&lines);
                let t = (span.start..span_end)
                    .find(|&t| geom.tope(numbering.order[t]).restrict(&lines) == label_j);
                match t {
                    None => {
                        // region j lies in a cone with no span region: its
                        // block-column entries must already be zero
                        for c in span.start..span_end {
                            if !w.get(j, c).is_zero() {
                                return Err(ReductionError::MultiplierInconsistent {
                                    row: j,
                                    msg: format!(
                                        "no cone-matched span row, but entry ({j},{c}) is nonzero"
                                    ),
                                });
                            }
                        }
                    }
                    Some(t) => {
                        let c0 = (span.start..span_end)
                            .find(|&c| !w.get(t, c).is_zero())
                            .expect("span rows have a nonzero diagonal entry");
                        let mu = w
                            .get(j, c0)
                            .try_exact_div(w.get(t, c0))
                            .map_err(|_| ReductionError::ExactDivisionFailure {
                                pivot: t,
                                target: j,
                            })?;
                        for c in span.start..span_end {
                            if w.get(j, c) != &mu.mul(w.get(t, c)) {
                                return Err(ReductionError::MultiplierInconsistent {
                                    row: j,
                                    msg: format!(
                                        "multiplier from column {c0} does not clear column {c}"
                                    ),
                                });
                            }
                        }
                        apply(&mut w, &mut left, &mut right, &mut ops, j, t, mu);
                    }
                }
            }
            pos = span_end;
        } else {
            let d = w.get(pos, pos).clone();
            for j in pos + 1..r {
                if w.get(j, pos).is_zero() {
                    continue;
                }
                let mu = w
                    .get(j, pos)
                    .try_exact_div(&d)
                    .map_err(|_| ReductionError::ExactDivisionFailure {
                        pivot: pos,
                        target: j,
                    })?;
                apply(&mut w, &mut left, &mut right, &mut ops, j, pos, mu);
            }
            pos += 1;
        }
        on_checkpoint(pos, &w);
    }

    // Extract and check the blocks.
    let in_same_span = |a: usize, b: usize| {
        numbering
            .block_spans
            .iter()
            .any(|s| a >= s.start && a < s.start + s.len && b >= s.start && b < s.start + s.len)
    };
    for i in 0..r {
        for j in 0..r {
            if i != j && !in_same_span(i, j) && !w.get(i, j).is_zero() {
                return Err(ReductionError::ResidualNonzero(i, j));
            }
        }
    }

    let mut blocks = Vec::new();
    let mut p = 0usize;
    while p < r {
        if let Some(span) = numbering
            .block_spans
            .iter()
            .find(|s| s.start == p)
            .copied()
        {
            let mult = span.len + 1;
            let wire_order = geom.point_lines_bottom_up(span.point);
            let vars: Vec<VariableId> = wire_order.iter().map(|&l| weights.var(l)).collect();
            let rev: Vec<VariableId> = vars.iter().rev().copied().collect();
            let mut sub = PolyMatrix::<C>::zero(span.len);
            for i in 0..span.len {
                for j in 0..span.len {
                    sub.set(i, j, w.get(span.start + i, span.start + j).clone());
                }
            }
            let candidate = [vars, rev]
                .into_iter()
                .map(|order| leftover_matrix::<C>(mult, &order))
                .find(|l| l.matrix == sub)
                .ok_or(ReductionError::BlockMismatch { point: span.point })?;
            blocks.push(Block::Leftover {
                span,
                label: poset[1 + geom.diagram.n + span.point].label(),
                matrix: candidate,
            });
            p += span.len;
        } else {
            let element = numbering.new_element[p]
                .ok_or_else(|| ReductionError::InvalidNumbering(format!(
                    "scalar position {p} has no new element"
                )))?;
            let value = w.get(p, p).clone();
            if value != element_product::<C>(&poset[element], weights) {
                return Err(ReductionError::ScalarMismatch { position: p });
            }
            blocks.push(Block::Scalar {
                position: p,
                element,
                label: poset[element].label(),
                value,
            });
            p += 1;
        }
    }

    Ok(BlockDiagonalForm {
        numbering: numbering.clone(),
        permuted_input: permuted,
        final_matrix: w,
        blocks,
        trace: ReductionTrace { ops, left, right },
    })
}

/// Runs the full symmetric elimination in numbering order and extracts the
/// block diagonal form, with all structural assertions enforced.
pub fn eliminate<C: Coeff>(
    geom: &Geometry,
    poset: &[PosetElement],
    weights: &WeightAssignment,
    vm: &VarchenkoMatrix<C>,
    numbering: &Numbering,
) -> Result<BlockDiagonalForm<C>, ReductionError> {
    eliminate_core(geom, poset, weights, vm, numbering, |_, _| {})
}

/// The intermediate matrices at every elimination checkpoint, keyed by the
/// number of completed positions. Checkpoints never fall inside a block
/// span. Recomputed from scratch on demand; the trace itself stores only
/// multipliers.
pub fn elimination_checkpoints<C: Coeff>(
    geom: &Geometry,
    poset: &[PosetElement],
    weights: &WeightAssignment,
    vm: &VarchenkoMatrix<C>,
    numbering: &Numbering,
) -> Result<Vec<(usize, PolyMatrix<C>)>, ReductionError> {
    let mut out = Vec::new();
    eliminate_core(geom, poset, weights, vm, numbering, |k, w| {
        out.push((k, w.clone()))
    })?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "PASS {}", c.name)?;
            } else {
                writeln!(f, "FAIL {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

fn eval_matrix<C: Coeff>(
    m: &PolyMatrix<C>,
    a: &std::collections::BTreeMap<VariableId, BigRational>,
) -> Vec<Vec<BigRational>> {
    (0..m.size())
        .map(|i| {
            (0..m.size())
                .map(|j| m.get(i, j).evaluate(a).expect("full assignment"))
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// The five-part verification of a block diagonal form: transformation
/// identity at seeded assignments, unit transformation determinants, scalar
/// multiset against the predicted diagonal, per-block leftover equality,
/// and the symbolic determinant formula.
pub fn verify_block_form<C: Coeff>(
    bdf: &BlockDiagonalForm<C>,
    poset: &[PosetElement],
    weights: &WeightAssignment,
    seed: u64,
) -> VerificationReport {
    let mut checks = Vec::new();
    let n = weights.n();

    // (1) left · V · right = final, at three seeded assignments
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..3u64 {
        let a = seeded_assignment(n, seed.wrapping_add(i));
        let lhs = mat_mul(
            &mat_mul(&eval_matrix(&bdf.trace.left, &a), &eval_matrix(&bdf.permuted_input, &a)),
            &eval_matrix(&bdf.trace.right, &a),
        );
        if lhs != eval_matrix(&bdf.final_matrix, &a) {
            ok = false;
            detail = format!("transformation identity fails at assignment {i}");
            break;
        }
    }
    checks.push(CheckResult {
        name: "transformation-identity",
        passed: ok,
        detail,
    });

    // (2) both transformation determinants are ±1
    let a = seeded_assignment(n, seed);
    let dl = brute_determinant(&bdf.trace.left, &a);
    let dr = brute_determinant(&bdf.trace.right, &a);
    let unit = |d: &BigRational| d == &BigRational::one() || d == &(-BigRational::one());
    checks.push(CheckResult {
        name: "unit-transformations",
        passed: unit(&dl) && unit(&dr),
        detail: format!("det(left) = {dl}, det(right) = {dr}"),
    });

    // (3) scalar multiset equals the predicted diagonal over nondegenerate
    // elements
    let mut predicted: Vec<String> = poset
        .iter()
        .filter(|e| !e.is_degenerate_point())
        .map(|e| element_product::<C>(e, weights).to_string())
        .collect();
    predicted.sort();
    let mut scalars: Vec<String> = bdf
        .blocks
        .iter()
        .filter_map(|b| match b {
            Block::Scalar { value, .. } => Some(value.to_string()),
            _ => None,
        })
        .collect();
    scalars.sort();
    checks.push(CheckResult {
        name: "scalar-multiset",
        passed: predicted == scalars,
        detail: if predicted == scalars {
            String::new()
        } else {
            format!("predicted {predicted:?}, got {scalars:?}")
        },
    });

    // (4) each block equals the leftover closed form in its variable order
    let blocks_ok = bdf.blocks.iter().all(|b| match b {
        Block::Scalar { .. } => true,
        Block::Leftover { span, matrix, .. } => {
            let expect = leftover_matrix::<C>(span.len + 1, &matrix.variable_order);
            expect.matrix == matrix.matrix
        }
    });
    checks.push(CheckResult {
        name: "leftover-blocks",
        passed: blocks_ok,
        detail: String::new(),
    });

    // (5) product of block determinants equals the determinant formula
    let mut det = Polynomial::<C>::one();
    for b in &bdf.blocks {
        det = det.mul(&match b {
            Block::Scalar { value, .. } => value.clone(),
            Block::Leftover { matrix, .. } => symbolic_determinant(&matrix.matrix),
        });
    }
    let formula = varchenko_determinant_formula::<C>(poset, weights);
    checks.push(CheckResult {
        name: "determinant-formula",
        passed: det == formula,
        detail: if det == formula {
            String::new()
        } else {
            format!("blocks give {det}, formula gives {formula}")
        },
    });

    VerificationReport { checks }
}
