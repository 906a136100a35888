//! Wiring diagrams, tope sets, region enumeration, the intersection poset,
//! and the splitting construction at the rightmost degenerate point.
//!
//! A wiring diagram is the canonical combinatorial encoding of a pseudoline
//! arrangement: `n` horizontal wires, numbered bottom to top by their initial
//! position, plus an ordered list of block-crossing events. A size-`k` event
//! reverses `k` contiguous wires, crossing all pairs within the block at a
//! single point. Every pair of wires crosses at most once; pairs that never
//! cross encode parallel pseudolines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{ArrangementError, ParseError};

/// 0-based region identifier, assigned in sweep order.
pub type RegionId = usize;
/// 0-based line (wire) identifier; wire `w` carries weight variable `x_{w+1}`.
pub type LineId = usize;
/// Point identifier: the index of the event where the lines cross.
pub type PointId = usize;

/// A block-crossing event: the `size` contiguous wires at vertical positions
/// `bottom..bottom+size-1` (1-based, from the bottom) reverse their order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub bottom: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiringDiagram {
    pub n: usize,
    pub events: Vec<Event>,
}

impl WiringDiagram {
    pub fn new(n: usize, events: Vec<Event>) -> Result<Self, ParseError> {
        let w = WiringDiagram { n, events };
        w.validate()?;
        Ok(w)
    }

    /// The `n`-basic degeneracy arrangement: `n` concurrent pseudolines.
    pub fn n_basic(n: usize) -> Self {
        WiringDiagram {
            n,
            events: vec![Event { bottom: 1, size: n }],
        }
    }

    fn validate(&self) -> Result<(), ParseError> {
        if self.n == 0 {
            return Err(ParseError::Syntax {
                line: 1,
                msg: "need at least one wire".into(),
            });
        }
        let mut crossed: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut perm: Vec<usize> = (0..self.n).collect();
        for (idx, ev) in self.events.iter().enumerate() {
            if ev.size < 2 {
                return Err(ParseError::InvalidEvent {
                    index: idx,
                    msg: format!("event size {} is below 2", ev.size),
                });
            }
            if ev.bottom < 1 || ev.bottom + ev.size - 1 > self.n {
                return Err(ParseError::InvalidEvent {
                    index: idx,
                    msg: format!(
                        "block {}..{} out of range for {} wires",
                        ev.bottom,
                        ev.bottom + ev.size - 1,
                        self.n
                    ),
                });
            }
            let b0 = ev.bottom - 1;
            let block = &perm[b0..b0 + ev.size];
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    let pair = (block[i].min(block[j]), block[i].max(block[j]));
                    if !crossed.insert(pair) {
                        return Err(ParseError::InvalidEvent {
                            index: idx,
                            msg: format!(
                                "wires {} and {} cross twice",
                                pair.0 + 1,
                                pair.1 + 1
                            ),
                        });
                    }
                }
            }
            perm[b0..b0 + ev.size].reverse();
        }
        Ok(())
    }

    /// Wire order per slab: `perms()[s][p]` is the wire at position `p`
    /// (0-based, from the bottom) in vertical slab `s` (slab `s` lies left
    /// of event `s`; the last slab extends to the right of all events).
    pub fn perms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.events.len() + 1);
        let mut perm: Vec<usize> = (0..self.n).collect();
        out.push(perm.clone());
        for ev in &self.events {
            let b0 = ev.bottom - 1;
            perm[b0..b0 + ev.size].reverse();
            out.push(perm.clone());
        }
        out
    }

    /// True iff every event is a simple crossing of two wires.
    pub fn is_semigeneral(&self) -> bool {
        self.events.iter().all(|ev| ev.size == 2)
    }

    /// Indices of events with three or more concurrent wires.
    pub fn degenerate_events(&self) -> Vec<usize> {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, ev)| ev.size >= 3)
            .map(|(i, _)| i)
            .collect()
    }

    /// Mirror image across a horizontal axis. Wire `w` maps to `n-1-w`.
    pub fn vertical_flip(&self) -> Self {
        WiringDiagram {
            n: self.n,
            events: self
                .events
                .iter()
                .map(|ev| Event {
                    bottom: self.n + 2 - ev.bottom - ev.size,
                    size: ev.size,
                })
                .collect(),
        }
    }
}

/// Parses the wiring-diagram file format: line 1 `wires <n>`, then one
/// `event <bottom> <size>` per line; `#` starts a comment.
pub fn parse_wiring_diagram(text: &str) -> Result<WiringDiagram, ParseError> {
    let mut n: Option<usize> = None;
    let mut events = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap();
        let lineno = lineno + 1;
        match keyword {
            "wires" => {
                if n.is_some() {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        msg: "duplicate `wires` line".into(),
                    });
                }
                let v = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| ParseError::Syntax {
                        line: lineno,
                        msg: "expected `wires <n>`".into(),
                    })?;
                n = Some(v);
            }
            "event" => {
                if n.is_none() {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        msg: "`event` before `wires`".into(),
                    });
                }
                let bottom = words.next().and_then(|w| w.parse::<usize>().ok());
                let size = words.next().and_then(|w| w.parse::<usize>().ok());
                match (bottom, size) {
                    (Some(bottom), Some(size)) => events.push(Event { bottom, size }),
                    _ => {
                        return Err(ParseError::Syntax {
                            line: lineno,
                            msg: "expected `event <bottom> <size>`".into(),
                        })
                    }
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    line: lineno,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
        if words.next().is_some() {
            return Err(ParseError::Syntax {
                line: lineno,
                msg: "trailing tokens".into(),
            });
        }
    }
    let n = n.ok_or(ParseError::Syntax {
        line: 1,
        msg: "missing `wires <n>` header".into(),
    })?;
    WiringDiagram::new(n, events)
}

/// A sign vector in `{+,-}^n` labeling a region: coordinate `a` is `+` when
/// the region lies above wire `a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tope {
    pub signs: Vec<i8>,
}

impl Tope {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn negated(&self) -> Tope {
        Tope {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Restriction to a set of lines: the cone label at their common point.
    pub fn restrict(&self, lines: &[LineId]) -> Vec<i8> {
        lines.iter().map(|&l| self.signs[l]).collect()
    }
}

impl fmt::Display for Tope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// The separation set: the lines on which two topes take opposite signs.
pub fn separation_set(t1: &Tope, t2: &Tope) -> Result<BTreeSet<LineId>, ArrangementError> {
    if t1.len() != t2.len() {
        return Err(ArrangementError::LengthMismatch(t1.len(), t2.len()));
    }
    Ok(t1
        .signs
        .iter()
        .zip(&t2.signs)
        .enumerate()
        .filter(|(_, (a, b))| *a != *b)
        .map(|(i, _)| i)
        .collect())
}

/// Parses the tope file format (one tope per line, `+`/`-` characters) and
/// checks the tope axioms that are decidable here: equal support, and
/// closure under negation.
pub fn topes_from_file(text: &str) -> Result<Vec<Tope>, ParseError> {
    let mut topes: Vec<Tope> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut signs = Vec::with_capacity(line.len());
        for ch in line.chars() {
            match ch {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                other => {
                    return Err(ParseError::InvalidTope {
                        index: topes.len(),
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
        topes.push(Tope { signs });
    }
    if topes.is_empty() {
        return Err(ParseError::InvalidTope {
            index: 0,
            msg: "empty tope set".into(),
        });
    }
    let len = topes[0].len();
    for (i, t) in topes.iter().enumerate() {
        if t.len() != len {
            return Err(ParseError::InvalidTope {
                index: i,
                msg: format!("length {} differs from {}", t.len(), len),
            });
        }
    }
    let set: BTreeSet<&Tope> = topes.iter().collect();
    for (i, t) in topes.iter().enumerate() {
        if !set.contains(&t.negated()) {
            return Err(ParseError::InvalidTope {
                index: i,
                msg: "tope set is not closed under negation".into(),
            });
        }
    }
    Ok(topes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Plane,
    Line(LineId),
    Point(PointId),
}

/// An element of the intersection poset, ordered by reverse inclusion:
/// the plane below every line, each line below every point on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetElement {
    pub kind: ElementKind,
    /// Lines whose intersection this element is; empty for the plane,
    /// a singleton for a line, two or more for a point.
    pub lines_through: Vec<LineId>,
    pub rank: usize,
}

impl PosetElement {
    pub fn is_degenerate_point(&self) -> bool {
        matches!(self.kind, ElementKind::Point(_)) && self.lines_through.len() >= 3
    }

    pub fn label(&self) -> String {
        match self.kind {
            ElementKind::Plane => "plane".into(),
            ElementKind::Line(l) => format!("line {}", l + 1),
            ElementKind::Point(_) => {
                let ls: Vec<String> = self
                    .lines_through
                    .iter()
                    .map(|l| (l + 1).to_string())
                    .collect();
                format!("point {{{}}}", ls.join(","))
            }
        }
    }
}

/// The intersection poset: one plane, one element per wire, one point per
/// event (multiplicity = event size). Element order: plane, lines, points.
pub fn intersection_poset(w: &WiringDiagram) -> Vec<PosetElement> {
    let perms = w.perms();
    let mut out = Vec::with_capacity(1 + w.n + w.events.len());
    out.push(PosetElement {
        kind: ElementKind::Plane,
        lines_through: Vec::new(),
        rank: 0,
    });
    for l in 0..w.n {
        out.push(PosetElement {
            kind: ElementKind::Line(l),
            lines_through: vec![l],
            rank: 1,
        });
    }
    for (j, ev) in w.events.iter().enumerate() {
        let b0 = ev.bottom - 1;
        let mut lines: Vec<LineId> = perms[j][b0..b0 + ev.size].to_vec();
        lines.sort_unstable();
        out.push(PosetElement {
            kind: ElementKind::Point(j),
            lines_through: lines,
            rank: 2,
        });
    }
    out
}

/// Everything the reduction needs to know about one region.
#[derive(Debug, Clone)]
pub struct RegionGeometry {
    pub id: RegionId,
    pub tope: Tope,
    /// For each slab where this region is present, the gap it occupies.
    pub slab_gaps: BTreeMap<usize, usize>,
    /// Neighbors sharing a one-dimensional edge, with the crossing line.
    pub adjacency: BTreeSet<(RegionId, LineId)>,
    /// Points having this region as a corner.
    pub incident_points: BTreeSet<PointId>,
}

/// One maximal cell of a line: an edge (with its two flanking regions) or a
/// vertex (a crossing point on the wire), in order along the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineCell {
    Edge { below: RegionId, above: RegionId },
    Vertex(PointId),
}

/// The full combinatorial geometry of a wiring diagram, produced by a single
/// left-to-right sweep.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub diagram: WiringDiagram,
    pub perms: Vec<Vec<usize>>,
    pub regions: Vec<RegionGeometry>,
    /// `region_at[s][g]`: the region occupying gap `g` (0..=n) in slab `s`.
    pub region_at: Vec<Vec<RegionId>>,
    /// Corner regions of each point, in cyclic order around the point:
    /// up the left side, then down the right side.
    pub corners: Vec<Vec<RegionId>>,
    /// Cells of each line in order along the wire.
    pub line_cells: Vec<Vec<LineCell>>,
}

/// Enumerates the regions of a wiring diagram by sweeping slabs left to
/// right. Region ids are deterministic: the leftmost slab bottom-to-top,
/// then each event's newly created regions bottom-to-top.
pub fn enumerate_regions(w: &WiringDiagram) -> Geometry {
    let n = w.n;
    let perms = w.perms();
    let slabs = w.events.len() + 1;

    let mut region_at: Vec<Vec<RegionId>> = Vec::with_capacity(slabs);
    region_at.push((0..=n).collect());
    let mut next_id = n + 1;
    for ev in &w.events {
        let prev = region_at.last().unwrap().clone();
        let b0 = ev.bottom - 1;
        let mut cur = prev.clone();
        for g in b0 + 1..b0 + ev.size {
            cur[g] = next_id;
            next_id += 1;
        }
        region_at.push(cur);
    }
    let total = next_id;

    // Topes: sign of region r at wire a is + iff a lies below r's gap.
    let mut topes: Vec<Option<Tope>> = vec![None; total];
    let mut slab_gaps: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); total];
    let mut pos = vec![vec![0usize; n]; slabs];
    for s in 0..slabs {
        for (p, &wire) in perms[s].iter().enumerate() {
            pos[s][wire] = p;
        }
        for g in 0..=n {
            let r = region_at[s][g];
            slab_gaps[r].insert(s, g);
            if topes[r].is_none() {
                let signs = (0..n).map(|a| if pos[s][a] < g { 1 } else { -1 }).collect();
                topes[r] = Some(Tope { signs });
            }
        }
    }

    // Adjacency: within each slab, gap g and gap g+1 share an edge along the
    // wire at position g.
    let mut adjacency: Vec<BTreeSet<(RegionId, LineId)>> = vec![BTreeSet::new(); total];
    for s in 0..slabs {
        for p in 0..n {
            let below = region_at[s][p];
            let above = region_at[s][p + 1];
            let wire = perms[s][p];
            adjacency[below].insert((above, wire));
            adjacency[above].insert((below, wire));
        }
    }

    // Corners of each point, in cyclic order around it.
    let mut corners: Vec<Vec<RegionId>> = Vec::with_capacity(w.events.len());
    let mut incident: Vec<BTreeSet<PointId>> = vec![BTreeSet::new(); total];
    for (j, ev) in w.events.iter().enumerate() {
        let b0 = ev.bottom - 1;
        let mut cyc = Vec::with_capacity(2 * ev.size);
        for g in b0..=b0 + ev.size {
            cyc.push(region_at[j][g]);
        }
        for g in (b0 + 1..b0 + ev.size).rev() {
            cyc.push(region_at[j + 1][g]);
        }
        for &r in &cyc {
            incident[r].insert(j);
        }
        corners.push(cyc);
    }

    // Cells along each line.
    let mut line_cells: Vec<Vec<LineCell>> = Vec::with_capacity(n);
    for a in 0..n {
        let my_events: Vec<usize> = w
            .events
            .iter()
            .enumerate()
            .filter(|(j, ev)| {
                let p = pos[*j][a];
                p >= ev.bottom - 1 && p < ev.bottom - 1 + ev.size
            })
            .map(|(j, _)| j)
            .collect();
        let mut cells = Vec::new();
        let mut start_slab = 0usize;
        for &j in &my_events {
            let p = pos[start_slab][a];
            cells.push(LineCell::Edge {
                below: region_at[start_slab][p],
                above: region_at[start_slab][p + 1],
            });
            cells.push(LineCell::Vertex(j));
            start_slab = j + 1;
        }
        let p = pos[start_slab][a];
        cells.push(LineCell::Edge {
            below: region_at[start_slab][p],
            above: region_at[start_slab][p + 1],
        });
        line_cells.push(cells);
    }

    let regions = (0..total)
        .map(|r| RegionGeometry {
            id: r,
            tope: topes[r].clone().expect("every region appears in a slab"),
            slab_gaps: std::mem::take(&mut slab_gaps[r]),
            adjacency: std::mem::take(&mut adjacency[r]),
            incident_points: std::mem::take(&mut incident[r]),
        })
        .collect();

    Geometry {
        diagram: w.clone(),
        perms,
        regions,
        region_at,
        corners,
        line_cells,
    }
}

impl Geometry {
    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    pub fn tope(&self, r: RegionId) -> &Tope {
        &self.regions[r].tope
    }

    /// Lines through an event's point, bottom to top in the slab immediately
    /// left of the event. This fixes the leftover-matrix variable order.
    pub fn point_lines_bottom_up(&self, j: PointId) -> Vec<LineId> {
        let ev = self.diagram.events[j];
        let b0 = ev.bottom - 1;
        self.perms[j][b0..b0 + ev.size].to_vec()
    }

    /// The `size - 1` regions created at event `j` (the cone sectors on its
    /// right), bottom to top.
    pub fn cone_regions(&self, j: PointId) -> Vec<RegionId> {
        let ev = self.diagram.events[j];
        let b0 = ev.bottom - 1;
        (b0 + 1..b0 + ev.size)
            .map(|g| self.region_at[j + 1][g])
            .collect()
    }
}

/// A maximal run of one wire that is part of the splitting border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderSegment {
    pub wire: LineId,
    /// First slab covered by this run.
    pub from_slab: usize,
    /// Last slab covered, or `None` for the terminal rays.
    pub to_slab: Option<usize>,
}

/// Result of splitting an arrangement at its rightmost degenerate point.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub chosen_point: PointId,
    pub border: Vec<BorderSegment>,
    pub first_part: BTreeSet<RegionId>,
    /// The part containing the cone at the chosen point; semigeneral.
    pub second_part: BTreeSet<RegionId>,
    /// The multiplicity-1 cone regions at the chosen point, bottom to top.
    pub cone_regions: Vec<RegionId>,
}

/// Splits the arrangement along pseudoline segments through the rightmost
/// degenerate point `M`, so that (a) `M` is the only degeneracy on the
/// border, (b) every wire crosses the border at most once, and (c) the part
/// containing the cone at `M` is semigeneral with exactly multiplicity-1
/// regions cornered at `M`. All three conclusions are checked, not assumed.
pub fn split_at_degeneracy(geom: &Geometry) -> Result<SplitResult, ArrangementError> {
    let w = &geom.diagram;
    let e = *w
        .degenerate_events()
        .last()
        .ok_or(ArrangementError::NoDegeneracy)?;
    let ev = w.events[e];
    let k = ev.size;
    let b0 = ev.bottom - 1;
    let slabs = w.events.len() + 1;

    let mut pos = vec![vec![0usize; w.n]; slabs];
    for s in 0..slabs {
        for (p, &wire) in geom.perms[s].iter().enumerate() {
            pos[s][wire] = p;
        }
    }

    // crossing event of each wire pair, if any
    let mut crossing: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (j, evj) in w.events.iter().enumerate() {
        let c0 = evj.bottom - 1;
        let block = &geom.perms[j][c0..c0 + evj.size];
        for i in 0..block.len() {
            for l in i + 1..block.len() {
                let key = (block[i].min(block[l]), block[i].max(block[l]));
                crossing.insert(key, j);
            }
        }
    }
    let cross = |a: usize, b: usize| crossing.get(&(a.min(b), a.max(b))).copied();

    let m_wires: BTreeSet<usize> = geom.perms[e][b0..b0 + k].iter().copied().collect();
    let lb_wire = geom.perms[e + 1][b0];
    let ub_wire = geom.perms[e + 1][b0 + k - 1];

    // Wires crossing the cone at two points, classified by their side of M.
    let mut upper_family: BTreeSet<usize> = BTreeSet::new(); // enter from above
    let mut lower_family: BTreeSet<usize> = BTreeSet::new(); // enter from below
    for v in 0..w.n {
        if m_wires.contains(&v) {
            continue;
        }
        let c_lb = cross(v, lb_wire).filter(|&f| f > e);
        let c_ub = cross(v, ub_wire).filter(|&f| f > e);
        if c_lb.is_some() && c_ub.is_some() {
            if pos[e + 1][v] > b0 + k - 1 {
                upper_family.insert(v);
            } else {
                lower_family.insert(v);
            }
        }
    }

    // Walk one border chain rightward from M, switching onto a family wire
    // at each crossing with a family member.
    let walk = |start: usize, family: &BTreeSet<usize>| -> (Vec<BorderSegment>, BTreeSet<usize>) {
        let mut segs = Vec::new();
        let mut switch_events = BTreeSet::new();
        let mut cur = start;
        let mut from = e + 1;
        let mut last_event = e;
        loop {
            let next = family
                .iter()
                .filter(|&&v| v != cur)
                .filter_map(|&v| cross(cur, v).filter(|&f| f > last_event).map(|f| (f, v)))
                .min();
            match next {
                Some((f, partner)) => {
                    segs.push(BorderSegment {
                        wire: cur,
                        from_slab: from,
                        to_slab: Some(f),
                    });
                    switch_events.insert(f);
                    cur = partner;
                    from = f + 1;
                    last_event = f;
                }
                None => {
                    segs.push(BorderSegment {
                        wire: cur,
                        from_slab: from,
                        to_slab: None,
                    });
                    break;
                }
            }
        }
        (segs, switch_events)
    };

    // The lower border is crossed by wires entering from above and vice
    // versa, so the lower chain reroutes along the upper family.
    let (low_segs, low_switches) = walk(lb_wire, &upper_family);
    let (up_segs, up_switches) = walk(ub_wire, &lower_family);
    let mut border = low_segs;
    border.extend(up_segs);
    let mut switch_events: BTreeSet<usize> = low_switches;
    switch_events.extend(up_switches);

    let on_border = |wire: usize, slab: usize| -> bool {
        border.iter().any(|seg| {
            seg.wire == wire
                && slab >= seg.from_slab
                && seg.to_slab.map(|t| slab <= t).unwrap_or(true)
        })
    };

    // Partition regions: remove adjacency edges lying on the border, then
    // take connected components.
    let total = geom.num_regions();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in 0..slabs {
        for p in 0..w.n {
            let wire = geom.perms[s][p];
            if on_border(wire, s) {
                continue;
            }
            let a = find(&mut parent, geom.region_at[s][p]);
            let b = find(&mut parent, geom.region_at[s][p + 1]);
            parent[a] = b;
        }
    }
    let cone = geom.cone_regions(e);
    let pocket_root = find(&mut parent, cone[0]);
    let mut second_part = BTreeSet::new();
    let mut first_part = BTreeSet::new();
    let mut roots = BTreeSet::new();
    for r in 0..total {
        let root = find(&mut parent, r);
        roots.insert(root);
        if root == pocket_root {
            second_part.insert(r);
        } else {
            first_part.insert(r);
        }
    }

    // Postconditions of the splitting lemma.
    if roots.len() != 2 {
        return Err(ArrangementError::SplitInvariant(format!(
            "border cuts the region graph into {} components, expected 2",
            roots.len()
        )));
    }
    for &c in &cone {
        if !second_part.contains(&c) {
            return Err(ArrangementError::SplitInvariant(
                "cone regions are not on one side of the border".into(),
            ));
        }
    }
    // (a) the chosen point is the only degeneracy on the border: every
    // switch corner must be a simple crossing.
    for &f in &switch_events {
        if w.events[f].size != 2 {
            return Err(ArrangementError::SplitInvariant(format!(
                "degenerate point {f} lies on the border"
            )));
        }
    }
    // (b) every wire crosses the border at most once. Wires through M cross
    // it at M itself; transversal crossings with a border segment count too,
    // switch corners do not.
    for v in 0..w.n {
        let mut count = 0usize;
        if m_wires.contains(&v) && v != lb_wire && v != ub_wire {
            count += 1; // crosses at M
        }
        for seg in &border {
            if seg.wire == v {
                continue;
            }
            if let Some(f) = cross(v, seg.wire) {
                let interior = f >= seg.from_slab
                    && seg.to_slab.map(|t| f < t).unwrap_or(true)
                    && !switch_events.contains(&f)
                    && f != e;
                if interior {
                    count += 1;
                }
            }
        }
        if count > 1 {
            return Err(ArrangementError::SplitInvariant(format!(
                "wire {} crosses the border {} times",
                v + 1,
                count
            )));
        }
    }
    // (c) the cone part is semigeneral and has exactly multiplicity-1
    // regions cornered at M.
    let m_corner_count = geom.corners[e]
        .iter()
        .filter(|r| second_part.contains(r))
        .count();
    if m_corner_count != k - 1 {
        return Err(ArrangementError::SplitInvariant(format!(
            "cone part has {} regions cornered at the chosen point, expected {}",
            m_corner_count,
            k - 1
        )));
    }
    for j in w.degenerate_events() {
        if j == e {
            continue;
        }
        if geom.corners[j].iter().any(|r| second_part.contains(r)) {
            return Err(ArrangementError::SplitInvariant(format!(
                "degenerate point {j} touches the cone part"
            )));
        }
    }

    Ok(SplitResult {
        chosen_point: e,
        border,
        first_part,
        second_part,
        cone_regions: cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> WiringDiagram {
        parse_wiring_diagram(text).expect("valid diagram")
    }

    #[test]
    fn parse_smallest_crossing() {
        let w = parse("wires 2\nevent 1 2\n");
        assert_eq!(w.n, 2);
        assert_eq!(w.events, vec![Event { bottom: 1, size: 2 }]);
    }

    #[test]
    fn parse_three_basic() {
        let w = parse("wires 3\nevent 1 3\n");
        assert_eq!(w.degenerate_events(), vec![0]);
        assert!(!w.is_semigeneral());
    }

    #[test]
    fn parse_rejects_double_crossing_and_range() {
        let twice = parse_wiring_diagram("wires 2\nevent 1 2\nevent 1 2\n");
        assert!(matches!(twice, Err(ParseError::InvalidEvent { index: 1, .. })));
        let range = parse_wiring_diagram("wires 3\nevent 3 2\n");
        assert!(matches!(range, Err(ParseError::InvalidEvent { index: 0, .. })));
        let syntax = parse_wiring_diagram("wires 3\nevent 1\n");
        assert!(matches!(syntax, Err(ParseError::Syntax { line: 2, .. })));
    }

    #[test]
    fn parse_allows_comments_and_parallels() {
        // two parallel wires: no events at all
        let w = parse("# parallel pair\nwires 2\n\n");
        assert!(w.events.is_empty());
        assert!(w.is_semigeneral());
    }

    #[test]
    fn regions_of_single_wire() {
        let g = enumerate_regions(&parse("wires 1\n"));
        assert_eq!(g.num_regions(), 2);
        let topes: BTreeSet<String> = g.regions.iter().map(|r| r.tope.to_string()).collect();
        assert_eq!(topes, BTreeSet::from(["+".to_string(), "-".to_string()]));
    }

    #[test]
    fn regions_of_simple_crossing() {
        let g = enumerate_regions(&parse("wires 2\nevent 1 2\n"));
        assert_eq!(g.num_regions(), 4);
        let poset = intersection_poset(&g.diagram);
        assert_eq!(poset.len(), 4); // plane, two lines, one point
        assert_eq!(poset[3].lines_through, vec![0, 1]);
    }

    #[test]
    fn regions_of_three_basic() {
        let g = enumerate_regions(&WiringDiagram::n_basic(3));
        assert_eq!(g.num_regions(), 6); // 1 + 3 + (3-1)
        let mut topes: Vec<String> = g.regions.iter().map(|r| r.tope.to_string()).collect();
        topes.sort();
        assert_eq!(topes, vec!["+++", "++-", "+--", "-++", "--+", "---"]);
        // every tope's negation is present
        for r in &g.regions {
            assert!(g.regions.iter().any(|o| o.tope == r.tope.negated()));
        }
    }

    #[test]
    fn generic_triangle_poset() {
        let w = parse("wires 3\nevent 1 2\nevent 2 2\nevent 1 2\n");
        let poset = intersection_poset(&w);
        let points: Vec<_> = poset.iter().filter(|p| matches!(p.kind, ElementKind::Point(_))).collect();
        assert_eq!(points.len(), 3);
        assert!(points.iter().all(|p| p.lines_through.len() == 2));
        assert_eq!(enumerate_regions(&w).num_regions(), 7);
    }

    #[test]
    fn separation_sets() {
        let t = |s: &str| Tope {
            signs: s.chars().map(|c| if c == '+' { 1 } else { -1 }).collect(),
        };
        assert!(separation_set(&t("++"), &t("++")).unwrap().is_empty());
        assert_eq!(
            separation_set(&t("+-"), &t("-+")).unwrap(),
            BTreeSet::from([0, 1])
        );
        assert!(separation_set(&t("+"), &t("++")).is_err());
    }

    #[test]
    fn tope_file_axioms() {
        let ok = topes_from_file("++\n+-\n-+\n--\n").unwrap();
        assert_eq!(ok.len(), 4);
        let doubling = topes_from_file("++\n--\n").unwrap();
        assert_eq!(doubling.len(), 2);
        let bad = topes_from_file("++\n+-\n");
        assert!(matches!(bad, Err(ParseError::InvalidTope { .. })));
    }

    #[test]
    fn adjacency_differs_in_one_coordinate() {
        let g = enumerate_regions(&parse("wires 3\nevent 1 2\nevent 2 2\nevent 1 2\n"));
        for r in &g.regions {
            for &(o, line) in &r.adjacency {
                let sep = separation_set(&r.tope, &g.regions[o].tope).unwrap();
                assert_eq!(sep, BTreeSet::from([line]));
            }
        }
    }

    #[test]
    fn split_three_basic() {
        let g = enumerate_regions(&WiringDiagram::n_basic(3));
        let s = split_at_degeneracy(&g).unwrap();
        assert_eq!(s.chosen_point, 0);
        assert_eq!(s.second_part.len(), 2); // the two cone sectors
        assert_eq!(s.first_part.len(), 4);
    }

    #[test]
    fn split_skips_simple_crossings() {
        // one size-3 event and a simple crossing right of it
        let w = parse("wires 4\nevent 1 3\nevent 3 2\n");
        let g = enumerate_regions(&w);
        let s = split_at_degeneracy(&g).unwrap();
        assert_eq!(s.chosen_point, 0);
    }

    #[test]
    fn split_requires_degeneracy() {
        let g = enumerate_regions(&parse("wires 2\nevent 1 2\n"));
        assert!(matches!(
            split_at_degeneracy(&g),
            Err(ArrangementError::NoDegeneracy)
        ));
    }

    #[test]
    fn split_with_rerouted_border() {
        // wire 4 dives through the cone of the triple point: the border must
        // reroute along it.
        let w = parse("wires 4\nevent 1 3\nevent 3 2\nevent 2 2\nevent 1 2\n");
        let g = enumerate_regions(&w);
        assert_eq!(g.num_regions(), 10);
        let s = split_at_degeneracy(&g).unwrap();
        assert_eq!(s.chosen_point, 0);
        // the cone plus the three regions swept by the rerouting wire
        assert_eq!(s.second_part.len(), 5);
        assert_eq!(s.cone_regions.len(), 2);
    }

    #[test]
    fn vertical_flip_negates_topes() {
        let w = parse("wires 4\nevent 1 3\nevent 3 2\nevent 2 2\nevent 1 2\n");
        let flipped = w.vertical_flip();
        flipped.validate().unwrap();
        let orig: BTreeSet<Vec<i8>> = enumerate_regions(&w)
            .regions
            .iter()
            .map(|r| r.tope.signs.clone())
            .collect();
        // flipping renumbers wire w to n-1-w, so compare against the
        // coordinate-reversed negations
        let mapped: BTreeSet<Vec<i8>> = enumerate_regions(&flipped)
            .regions
            .iter()
            .map(|r| r.tope.signs.iter().rev().map(|s| -s).collect())
            .collect();
        assert_eq!(orig, mapped);
    }
}
