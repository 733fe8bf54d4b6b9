//! Combinatorial admissible covers and their verification.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::circuit::{CircuitGraph, Role};
use super::divisor::{Divisor, MarkedPoint};
use super::trace::{OracleCall, Step, VerificationReport};
use crate::combinatorics::Count;
use crate::error::GonalityError;

#[derive(Debug, Clone, Serialize)]
pub struct SourceComponent {
    pub name: String,
    pub genus: u32,
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<MarkedPoint>,
}

fn serialize_points<S: serde::Serializer>(points: &[MarkedPoint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(points.iter().map(|p| &p.label))
}

impl SourceComponent {
    pub fn point(&self, label: &str) -> Option<&MarkedPoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetComponent {
    pub name: String,
    pub genus: u32,
    pub points: Vec<String>,
}

/// A point on a component, by component index and point label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointRef {
    pub component: usize,
    pub point: String,
}

impl PointRef {
    pub fn new(component: usize, point: &str) -> Self {
        Self {
            component,
            point: point.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeRef {
    pub a: PointRef,
    pub b: PointRef,
}

/// Fiber of a source component over one target node point, as labelled
/// points with ramification indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub target_point: String,
    pub points: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentMap {
    pub source: usize,
    pub target: usize,
    pub degree: u32,
    pub fibers: Vec<Fiber>,
    /// Ramification indices at smooth (marked) ramification points.
    pub smooth_ramification: Vec<u32>,
}

impl ComponentMap {
    pub fn fiber_over(&self, target_point: &str) -> Option<&Fiber> {
        self.fibers.iter().find(|f| f.target_point == target_point)
    }
}

/// A finite map of nodal curves described combinatorially.
#[derive(Debug, Clone, Serialize)]
pub struct CoverData {
    pub name: String,
    pub sources: Vec<SourceComponent>,
    pub source_nodes: Vec<NodeRef>,
    pub targets: Vec<TargetComponent>,
    pub target_nodes: Vec<NodeRef>,
    pub maps: Vec<ComponentMap>,
    /// Choices the construction fixes that are not forced.
    pub notes: Vec<String>,
}

impl CoverData {
    pub fn source_index(&self, name: &str) -> Option<usize> {
        self.sources.iter().position(|s| s.name == name)
    }

    pub fn target_index(&self, name: &str) -> Option<usize> {
        self.targets.iter().position(|t| t.name == name)
    }

    pub fn map_of(&self, source: usize) -> Option<&ComponentMap> {
        self.maps.iter().find(|m| m.source == source)
    }

    pub fn map_of_mut(&mut self, source: usize) -> Option<&mut ComponentMap> {
        self.maps.iter_mut().find(|m| m.source == source)
    }

    fn fiber_divisor(&self, source: usize, fiber: &Fiber) -> Option<Divisor> {
        let comp = self.sources.get(source)?;
        let mut d = Divisor::new(&comp.name);
        for (label, m) in &fiber.points {
            d = d.plus(comp.point(label)?, *m);
        }
        Some(d)
    }
}

fn graph_genus(genera: &[u32], edges: &[(usize, usize)]) -> Option<u64> {
    if !connected(genera.len(), edges) {
        return None;
    }
    let sum: u64 = genera.iter().map(|&g| u64::from(g)).sum();
    Some(sum + edges.len() as u64 + 1 - genera.len() as u64)
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a < n && b < n {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Structural sanity: indices and labels resolve, one map per source.
fn structure_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    let check_ref = |r: &PointRef,
                     n: usize,
                     has: &dyn Fn(usize, &str) -> bool,
                     what: &str,
                     out: &mut Vec<String>| {
        if r.component >= n || !has(r.component, &r.point) {
            out.push(format!("{what} node endpoint {r:?} does not exist"));
        }
    };
    let src_has = |c: usize, p: &str| cover.sources[c].point(p).is_some();
    let tgt_has = |c: usize, p: &str| cover.targets[c].points.iter().any(|q| q == p);
    for n in &cover.source_nodes {
        check_ref(&n.a, cover.sources.len(), &src_has, "source", &mut problems);
        check_ref(&n.b, cover.sources.len(), &src_has, "source", &mut problems);
    }
    for n in &cover.target_nodes {
        check_ref(&n.a, cover.targets.len(), &tgt_has, "target", &mut problems);
        check_ref(&n.b, cover.targets.len(), &tgt_has, "target", &mut problems);
    }
    for (i, s) in cover.sources.iter().enumerate() {
        let count = cover.maps.iter().filter(|m| m.source == i).count();
        if count != 1 {
            problems.push(format!("{} has {count} maps", s.name));
        }
    }
    for m in &cover.maps {
        let Some(src) = cover.sources.get(m.source) else {
            problems.push(format!("map from unknown source {}", m.source));
            continue;
        };
        let Some(tgt) = cover.targets.get(m.target) else {
            problems.push(format!("{} maps to unknown target {}", src.name, m.target));
            continue;
        };
        for f in &m.fibers {
            if !tgt.points.contains(&f.target_point) {
                problems.push(format!(
                    "{} has a fiber over unknown point {}",
                    src.name, f.target_point
                ));
            }
            for (label, mult) in &f.points {
                if src.point(label).is_none() {
                    problems.push(format!("{} has no point {label}", src.name));
                }
                if *mult == 0 {
                    problems.push(format!("{} has a zero multiplicity at {label}", src.name));
                }
            }
        }
    }
    let step = Step::new("cover data is well formed", problems.is_empty());
    if problems.is_empty() {
        step
    } else {
        step.with_detail(problems.join("; "))
    }
}

fn step_from(claim: &str, problems: Vec<String>) -> Step {
    let ok = problems.is_empty();
    let step = Step::new(claim, ok);
    if ok {
        step
    } else {
        step.with_detail(problems.join("; "))
    }
}

/// Target node points lying on target component `t`.
fn node_points_on(cover: &CoverData, t: usize) -> BTreeSet<String> {
    cover
        .target_nodes
        .iter()
        .flat_map(|n| [&n.a, &n.b])
        .filter(|r| r.component == t)
        .map(|r| r.point.clone())
        .collect()
}

/// Image of a source point: `(target component, target point, index)`.
fn image_of(cover: &CoverData, p: &PointRef) -> Option<(usize, String, u32)> {
    let m = cover.map_of(p.component)?;
    m.fibers.iter().find_map(|f| {
        f.points
            .iter()
            .find(|(l, _)| *l == p.point)
            .map(|(_, e)| (m.target, f.target_point.clone(), *e))
    })
}

fn fiber_degree_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    for m in &cover.maps {
        let name = &cover.sources[m.source].name;
        let over = node_points_on(cover, m.target);
        for p in &over {
            match m.fibers.iter().filter(|f| &f.target_point == p).count() {
                1 => {
                    let f = m.fiber_over(p).unwrap();
                    let deg: u32 = f.points.iter().map(|(_, e)| e).sum();
                    if deg != m.degree {
                        problems.push(format!(
                            "{name}: fiber over {p} has degree {deg}, map degree {}",
                            m.degree
                        ));
                    }
                }
                k => problems.push(format!("{name}: {k} fibers over {p}")),
            }
        }
        for f in &m.fibers {
            if !over.contains(&f.target_point) {
                problems.push(format!(
                    "{name}: fiber recorded over non-node point {}",
                    f.target_point
                ));
            }
        }
    }
    step_from(
        "every fiber over a target node has degree equal to the map degree",
        problems,
    )
}

fn disjointness_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    for m in &cover.maps {
        let mut seen = BTreeSet::new();
        for f in &m.fibers {
            for (label, _) in &f.points {
                if !seen.insert(label) {
                    problems.push(format!(
                        "{}: point {label} lies in two fibers",
                        cover.sources[m.source].name
                    ));
                }
            }
        }
    }
    step_from("fibers over distinct target points are disjoint", problems)
}

fn target_node_between(
    cover: &CoverData,
    x: &(usize, String),
    y: &(usize, String),
) -> Option<usize> {
    cover.target_nodes.iter().position(|n| {
        let a = (n.a.component, n.a.point.clone());
        let b = (n.b.component, n.b.point.clone());
        (&a == x && &b == y) || (&a == y && &b == x)
    })
}

/// Admissibility (i): source nodes are exactly the points over target nodes,
/// and each source node maps onto a target node.
fn node_preimage_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    let endpoints: BTreeSet<PointRef> = cover
        .source_nodes
        .iter()
        .flat_map(|n| [n.a.clone(), n.b.clone()])
        .collect();
    let over_nodes: BTreeSet<PointRef> = cover
        .maps
        .iter()
        .flat_map(|m| {
            m.fibers.iter().flat_map(move |f| {
                f.points
                    .iter()
                    .map(move |(l, _)| PointRef::new(m.source, l))
            })
        })
        .collect();
    for p in endpoints.difference(&over_nodes) {
        problems.push(format!(
            "node point {}.{} does not lie over a target node",
            cover.sources[p.component].name, p.point
        ));
    }
    for p in over_nodes.difference(&endpoints) {
        problems.push(format!(
            "{}.{} lies over a target node but is not a node",
            cover.sources[p.component].name, p.point
        ));
    }
    for n in &cover.source_nodes {
        if let (Some((ta, pa, _)), Some((tb, pb, _))) =
            (image_of(cover, &n.a), image_of(cover, &n.b))
        {
            if target_node_between(cover, &(ta, pa.clone()), &(tb, pb.clone())).is_none() {
                problems.push(format!(
                    "node {}.{}~{}.{} maps to {}.{} and {}.{}, which are not glued",
                    cover.sources[n.a.component].name,
                    n.a.point,
                    cover.sources[n.b.component].name,
                    n.b.point,
                    cover.targets[ta].name,
                    pa,
                    cover.targets[tb].name,
                    pb
                ));
            }
        }
    }
    step_from(
        "(i) the nodes of the source are exactly the preimages of the target nodes",
        problems,
    )
}

fn ramification_match_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    for n in &cover.source_nodes {
        if let (Some((_, _, ea)), Some((_, _, eb))) = (image_of(cover, &n.a), image_of(cover, &n.b))
        {
            if ea != eb {
                problems.push(format!(
                    "indices {ea} at {}.{} and {eb} at {}.{} differ",
                    cover.sources[n.a.component].name,
                    n.a.point,
                    cover.sources[n.b.component].name,
                    n.b.point
                ));
            }
        }
    }
    step_from(
        "(iii) ramification indices agree on both branches of every node",
        problems,
    )
}

fn riemann_hurwitz_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    for m in &cover.maps {
        let src = &cover.sources[m.source];
        let tgt = &cover.targets[m.target];
        let at_nodes: i64 = m
            .fibers
            .iter()
            .flat_map(|f| &f.points)
            .map(|(_, e)| i64::from(*e) - 1)
            .sum();
        let smooth: i64 = m
            .smooth_ramification
            .iter()
            .map(|&e| i64::from(e) - 1)
            .sum();
        if let Some(&e) = m
            .smooth_ramification
            .iter()
            .find(|&&e| e < 2 || e > m.degree)
        {
            problems.push(format!(
                "{}: smooth ramification index {e} out of range",
                src.name
            ));
        }
        let lhs = 2 * i64::from(src.genus) - 2;
        let rhs = i64::from(m.degree) * (2 * i64::from(tgt.genus) - 2) + at_nodes + smooth;
        if lhs != rhs {
            problems.push(format!(
                "{}: 2g-2 = {lhs} but degree and ramification give {rhs}",
                src.name
            ));
        }
    }
    step_from("Riemann-Hurwitz holds on every source component", problems)
}

/// Pairwise equivalence of node fibers on each elliptic component.
fn equivalence_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    let mut calls = Vec::new();
    for m in &cover.maps {
        let src = &cover.sources[m.source];
        if src.genus == 0 {
            continue;
        }
        let divisors: Vec<Divisor> = m
            .fibers
            .iter()
            .filter_map(|f| cover.fiber_divisor(m.source, f))
            .collect();
        let fully_marked = divisors.iter().filter(|d| !d.has_generic()).count();
        if m.degree >= 3 && fully_marked >= 3 {
            problems.push(format!(
                "{}: degree {} with {fully_marked} fully marked fibers needs a pencil test, out of scope",
                src.name, m.degree
            ));
            continue;
        }
        for i in 0..divisors.len() {
            for j in i + 1..divisors.len() {
                match OracleCall::run(&divisors[i], &divisors[j]) {
                    Ok(call) => {
                        if !call.equivalent {
                            problems.push(format!(
                                "{}: {} is not equivalent to {}",
                                src.name, call.lhs, call.rhs
                            ));
                        }
                        calls.push(call);
                    }
                    Err(e) => problems.push(e.to_string()),
                }
            }
        }
    }
    step_from(
        "node fibers on each elliptic component are linearly equivalent",
        problems,
    )
    .with_calls(calls)
}

fn tree_step(cover: &CoverData) -> Step {
    let mut problems = Vec::new();
    if let Some(t) = cover.targets.iter().find(|t| t.genus != 0) {
        problems.push(format!("target {} is not rational", t.name));
    }
    let edges: Vec<(usize, usize)> = cover
        .target_nodes
        .iter()
        .map(|n| (n.a.component, n.b.component))
        .collect();
    if !connected(cover.targets.len(), &edges) {
        problems.push("target is disconnected".into());
    } else if edges.len() + 1 != cover.targets.len() {
        problems.push(format!(
            "{} nodes on {} components is not a tree",
            edges.len(),
            cover.targets.len()
        ));
    }
    step_from("target is a tree of rational curves", problems)
}

fn constant_degree_step(cover: &CoverData) -> (Step, Option<u32>) {
    let mut per_target = vec![0u32; cover.targets.len()];
    for m in &cover.maps {
        per_target[m.target] += m.degree;
    }
    let distinct: BTreeSet<u32> = per_target.iter().copied().collect();
    let ok = distinct.len() == 1;
    let detail = cover
        .targets
        .iter()
        .zip(&per_target)
        .map(|(t, d)| format!("{}:{d}", t.name))
        .collect::<Vec<_>>()
        .join(" ");
    (
        Step::new("total degree is the same over every target component", ok).with_detail(detail),
        if ok {
            distinct.into_iter().next()
        } else {
            None
        },
    )
}

/// Checks that `cover` is an admissible cover of a tree of rational curves.
pub fn verify_cover(cover: &CoverData) -> VerificationReport {
    let mut steps = vec![structure_step(cover)];
    if !steps[0].passed() {
        return VerificationReport {
            subject: cover.name.clone(),
            steps,
        };
    }
    let elliptic_degrees: Vec<String> = cover
        .maps
        .iter()
        .filter(|m| {
            let g = cover.sources[m.source].genus;
            (g >= 1 && m.degree < 2) || m.degree == 0
        })
        .map(|m| cover.sources[m.source].name.clone())
        .collect();
    steps.push(step_from(
        "elliptic sources map with degree >= 2, rational ones with degree >= 1",
        elliptic_degrees
            .into_iter()
            .map(|n| format!("{n} has too small a degree"))
            .collect(),
    ));
    steps.push(tree_step(cover));
    steps.push(fiber_degree_step(cover));
    steps.push(disjointness_step(cover));
    steps.push(node_preimage_step(cover));
    steps.push(ramification_match_step(cover));
    steps.push(riemann_hurwitz_step(cover));
    steps.push(equivalence_step(cover));
    steps.push(constant_degree_step(cover).0);
    VerificationReport {
        subject: cover.name.clone(),
        steps,
    }
}

/// Degree of the cover over each target component, if constant.
pub fn cover_degree(cover: &CoverData) -> Option<u32> {
    constant_degree_step(cover).1
}

struct CoverBuilder {
    cover: CoverData,
}

impl CoverBuilder {
    fn source(&mut self, name: &str, genus: u32, points: Vec<MarkedPoint>) -> usize {
        self.cover.sources.push(SourceComponent {
            name: name.to_string(),
            genus,
            points,
        });
        self.cover.sources.len() - 1
    }

    fn target(&mut self, name: &str, genus: u32, points: &[&str]) -> usize {
        self.cover.targets.push(TargetComponent {
            name: name.to_string(),
            genus,
            points: points.iter().map(|p| p.to_string()).collect(),
        });
        self.cover.targets.len() - 1
    }

    fn source_node(&mut self, a: (usize, &str), b: (usize, &str)) {
        self.cover.source_nodes.push(NodeRef {
            a: PointRef::new(a.0, a.1),
            b: PointRef::new(b.0, b.1),
        });
    }

    fn target_node(&mut self, a: (usize, &str), b: (usize, &str)) {
        self.cover.target_nodes.push(NodeRef {
            a: PointRef::new(a.0, a.1),
            b: PointRef::new(b.0, b.1),
        });
    }

    fn map(
        &mut self,
        source: usize,
        target: usize,
        degree: u32,
        fibers: Vec<(&str, Vec<(&str, u32)>)>,
        smooth: Vec<u32>,
    ) {
        self.cover.maps.push(ComponentMap {
            source,
            target,
            degree,
            fibers: fibers
                .into_iter()
                .map(|(tp, pts)| Fiber {
                    target_point: tp.to_string(),
                    points: pts.into_iter().map(|(l, e)| (l.to_string(), e)).collect(),
                })
                .collect(),
            smooth_ramification: smooth,
        });
    }
}

/// Smooth ramification a degree-`deg` map from genus `g` to a rational curve
/// still needs after the given node ramification, as simple branch points.
fn remaining_simple_ramification(genus: u32, deg: u32, at_nodes: u32) -> Vec<u32> {
    let total = 2 * genus + 2 * deg - 2;
    vec![2; (total - at_nodes) as usize]
}

/// The degree-6 admissible cover of `W^1_4` onto a tree of six rational curves.
///
/// Circuit components alternate between `R1` (`C'2`, `C'4`, `C''3`) and `R2`
/// (`C'3`, `C''2`, `C''4`), each mapped by the pencil `|Y + Z|` so that every
/// circuit node lies over the node `R1 ~ R2`. On the four components with a
/// tail, `2X ~ Y + Z` makes `X` a ramification point; a rational curve is
/// attached to the target at the image of each `X`, the tail maps to it by
/// `|2N|`, and sixteen rational curves attached at the remaining points of
/// those fibers map isomorphically onto it.
pub fn build_degree6_cover(circuit: &CircuitGraph) -> Result<CoverData, GonalityError> {
    let mut b = CoverBuilder {
        cover: CoverData {
            name: "degree-6 admissible cover of W^1_4".into(),
            sources: Vec::new(),
            source_nodes: Vec::new(),
            targets: Vec::new(),
            target_nodes: Vec::new(),
            maps: Vec::new(),
            notes: vec![
                "Y and Z of every circuit component lie over the node joining R1 and R2".into(),
                "each X lies over the point where the rational curve receiving its tail is attached".into(),
            ],
        },
    };
    let on_r1 = ["C'2", "C'4", "C''3"];
    let side = |name: &str| if on_r1.contains(&name) { 0usize } else { 1 };
    if circuit
        .cycle_nodes
        .iter()
        .any(|n| side(&circuit.circuit[n.left].name) == side(&circuit.circuit[n.right].name))
    {
        return Err(GonalityError::Inconsistent(
            "circuit does not alternate between R1 and R2".into(),
        ));
    }

    // tails grouped by the side their carrier maps to
    let mut tails_by_side: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, t) in circuit.tails.iter().enumerate() {
        tails_by_side[side(&circuit.circuit[t.attached_to].name)].push(i);
    }
    let tail_point = |i: usize| format!("t[{}]", circuit.tails[i].name);
    let tail_target = |i: usize| {
        let name = &circuit.tails[i].name;
        format!("R{}", &name[1..])
    };

    let r_points: Vec<Vec<String>> = (0..2)
        .map(|s| {
            let mut pts = vec!["n".to_string()];
            pts.extend(tails_by_side[s].iter().map(|&i| tail_point(i)));
            pts
        })
        .collect();
    let r1 = b.target(
        "R1",
        0,
        &r_points[0].iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let r2 = b.target(
        "R2",
        0,
        &r_points[1].iter().map(String::as_str).collect::<Vec<_>>(),
    );
    b.target_node((r1, "n"), (r2, "n"));
    let sides = [r1, r2];
    let mut tail_targets = BTreeMap::new();
    for s in 0..2 {
        for &i in &tails_by_side[s] {
            let t = b.target(&tail_target(i), 0, &["m"]);
            b.target_node((sides[s], &tail_point(i)), (t, "m"));
            tail_targets.insert(i, t);
        }
    }

    // circuit components
    let mut circuit_src = Vec::with_capacity(6);
    // generic points on each circuit component, per tail point of its side
    let mut generic_points: Vec<BTreeMap<usize, [String; 2]>> = Vec::with_capacity(6);
    for (pos, c) in circuit.circuit.iter().enumerate() {
        let s = side(&c.name);
        let mut points: Vec<MarkedPoint> = [Role::X, Role::Y, Role::Z]
            .into_iter()
            .filter_map(|r| c.marked_point(r))
            .collect();
        let mut gen = BTreeMap::new();
        let mut k = 0;
        for &i in &tails_by_side[s] {
            if circuit.tails[i].attached_to == pos {
                continue;
            }
            let labels = [format!("f{}", k + 1), format!("f{}", k + 2)];
            k += 2;
            for l in &labels {
                points.push(MarkedPoint::generic(&c.name, l));
            }
            gen.insert(i, labels);
        }
        circuit_src.push(b.source(&c.name, 1, points));
        generic_points.push(gen);
    }
    for n in &circuit.cycle_nodes {
        b.source_node(
            (circuit_src[n.left], n.left_role.label()),
            (circuit_src[n.right], n.right_role.label()),
        );
    }
    for (pos, c) in circuit.circuit.iter().enumerate() {
        let s = side(&c.name);
        let mut fibers: Vec<(String, Vec<(String, u32)>)> =
            vec![("n".into(), vec![("Y".into(), 1), ("Z".into(), 1)])];
        let mut at_nodes = 0;
        for &i in &tails_by_side[s] {
            if circuit.tails[i].attached_to == pos {
                fibers.push((tail_point(i), vec![("X".into(), 2)]));
                at_nodes += 1;
            } else {
                let [f1, f2] = generic_points[pos][&i].clone();
                fibers.push((tail_point(i), vec![(f1, 1), (f2, 1)]));
            }
        }
        let fibers = fibers
            .iter()
            .map(|(tp, pts)| {
                (
                    tp.as_str(),
                    pts.iter().map(|(l, e)| (l.as_str(), *e)).collect(),
                )
            })
            .collect();
        b.map(
            circuit_src[pos],
            sides[s],
            2,
            fibers,
            remaining_simple_ramification(1, 2, at_nodes),
        );
    }

    // tails and the rational curves filling their fibers
    let mut rational = 0;
    for side_tails in &tails_by_side {
        for &i in side_tails {
            let tail = &circuit.tails[i];
            let t = tail_targets[&i];
            let src = b.source(&tail.name, 1, vec![MarkedPoint::isolated(&tail.name, "N")]);
            b.source_node((src, "N"), (circuit_src[tail.attached_to], "X"));
            b.map(
                src,
                t,
                2,
                vec![("m", vec![("N", 2)])],
                remaining_simple_ramification(1, 2, 1),
            );
            for (pos, gen) in generic_points.iter().enumerate() {
                let Some(labels) = gen.get(&i) else { continue };
                for l in labels {
                    rational += 1;
                    let name = format!("E{rational}");
                    let e = b.source(&name, 0, vec![MarkedPoint::isolated(&name, "p")]);
                    b.source_node((e, "p"), (circuit_src[pos], l));
                    b.map(e, t, 1, vec![("m", vec![("p", 1)])], Vec::new());
                }
            }
        }
    }
    Ok(b.cover)
}

/// Genus and étale checks for the double cover.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleCoverReport {
    pub report: VerificationReport,
    pub target_genus: Option<u64>,
    #[serde(with = "crate::serde_count")]
    pub source_genus: Count,
}

/// The unramified double cover of `W^1_4` onto a genus-6 curve made of the
/// five chain components: `C2, C3, C4` in a triangle through their `Y`, `Z`
/// points, `C1` and `C5` attached at `X`. Each `C'_i`, `C''_i` maps
/// isomorphically to `C_i`.
pub fn build_double_cover(circuit: &CircuitGraph) -> Result<CoverData, GonalityError> {
    let mut b = CoverBuilder {
        cover: CoverData {
            name: "etale double cover of W^1_4".into(),
            sources: Vec::new(),
            source_nodes: Vec::new(),
            targets: Vec::new(),
            target_nodes: Vec::new(),
            maps: Vec::new(),
            notes: Vec::new(),
        },
    };
    let chain_index = |name: &str| -> usize {
        name.trim_start_matches('C')
            .trim_start_matches('\'')
            .parse()
            .unwrap()
    };
    // roles each chain component carries, read off the circuit
    let mut roles: BTreeMap<usize, BTreeSet<&'static str>> = BTreeMap::new();
    for c in &circuit.circuit {
        let entry = roles.entry(chain_index(&c.name)).or_default();
        for p in &c.points {
            entry.insert(p.role.label());
        }
    }
    for t in &circuit.tails {
        roles.entry(chain_index(&t.name)).or_default().insert("X");
    }
    let mut target_of = BTreeMap::new();
    for (&i, rs) in &roles {
        let pts: Vec<&str> = rs.iter().copied().collect();
        target_of.insert(i, b.target(&format!("C{i}"), 1, &pts));
    }

    let mut src_of = BTreeMap::new();
    for c in &circuit.circuit {
        let pts = [Role::X, Role::Y, Role::Z]
            .into_iter()
            .filter_map(|r| c.marked_point(r))
            .collect();
        src_of.insert(c.name.clone(), b.source(&c.name, 1, pts));
    }
    for t in &circuit.tails {
        src_of.insert(
            t.name.clone(),
            b.source(&t.name, 1, vec![MarkedPoint::isolated(&t.name, "X")]),
        );
    }
    let mut target_nodes = BTreeSet::new();
    for n in &circuit.cycle_nodes {
        let (l, r) = (&circuit.circuit[n.left], &circuit.circuit[n.right]);
        b.source_node(
            (src_of[&l.name], n.left_role.label()),
            (src_of[&r.name], n.right_role.label()),
        );
        target_nodes.insert(canonical_node(
            (target_of[&chain_index(&l.name)], n.left_role.label()),
            (target_of[&chain_index(&r.name)], n.right_role.label()),
        ));
    }
    for t in &circuit.tails {
        let carrier = &circuit.circuit[t.attached_to];
        b.source_node((src_of[&t.name], "X"), (src_of[&carrier.name], "X"));
        target_nodes.insert(canonical_node(
            (target_of[&chain_index(&t.name)], "X"),
            (target_of[&chain_index(&carrier.name)], "X"),
        ));
    }
    for ((ta, pa), (tb, pb)) in &target_nodes {
        b.target_node((*ta, pa), (*tb, pb));
    }
    let names: Vec<String> = b.cover.sources.iter().map(|s| s.name.clone()).collect();
    for (s, name) in names.iter().enumerate() {
        let t = target_of[&chain_index(name)];
        let labels: Vec<String> = b.cover.sources[s]
            .points
            .iter()
            .map(|p| p.label.clone())
            .collect();
        let fibers = labels
            .iter()
            .map(|l| (l.as_str(), vec![(l.as_str(), 1)]))
            .collect();
        b.map(s, t, 1, fibers, Vec::new());
    }
    Ok(b.cover)
}

fn canonical_node(
    a: (usize, &'static str),
    b: (usize, &'static str),
) -> ((usize, &'static str), (usize, &'static str)) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Checks that the cover is étale of degree 2 and that genera satisfy
/// `2 g_source - 2 = 2 (2 g_target - 2)`.
pub fn verify_double_cover(cover: &CoverData, source_genus: &Count) -> DoubleCoverReport {
    let mut steps = vec![structure_step(cover)];
    if !steps[0].passed() {
        return DoubleCoverReport {
            report: VerificationReport {
                subject: cover.name.clone(),
                steps,
            },
            target_genus: None,
            source_genus: source_genus.clone(),
        };
    }
    let mut problems = Vec::new();
    for m in &cover.maps {
        if m.degree != 1 {
            problems.push(format!(
                "{} maps with degree {}",
                cover.sources[m.source].name, m.degree
            ));
        }
    }
    for (t, target) in cover.targets.iter().enumerate() {
        let pre = cover.maps.iter().filter(|m| m.target == t).count();
        if pre != 2 {
            problems.push(format!("{} has {pre} preimage components", target.name));
        }
    }
    steps.push(step_from(
        "every source component maps isomorphically, two over each target",
        problems,
    ));

    let mut problems = Vec::new();
    for m in &cover.maps {
        if !m.smooth_ramification.is_empty()
            || m.fibers
                .iter()
                .flat_map(|f| &f.points)
                .any(|(_, e)| *e != 1)
        {
            problems.push(format!("{} is ramified", cover.sources[m.source].name));
        }
    }
    steps.push(step_from("no ramification anywhere", problems));
    steps.push(fiber_degree_step(cover));
    steps.push(node_preimage_step(cover));

    let mut problems = Vec::new();
    let mut over = vec![0usize; cover.target_nodes.len()];
    for n in &cover.source_nodes {
        if let (Some((ta, pa, _)), Some((tb, pb, _))) =
            (image_of(cover, &n.a), image_of(cover, &n.b))
        {
            if let Some(k) = target_node_between(cover, &(ta, pa), &(tb, pb)) {
                over[k] += 1;
            }
        }
    }
    for (k, &c) in over.iter().enumerate() {
        if c != 2 {
            let n = &cover.target_nodes[k];
            problems.push(format!(
                "target node {}.{}~{}.{} has {c} preimages",
                cover.targets[n.a.component].name,
                n.a.point,
                cover.targets[n.b.component].name,
                n.b.point
            ));
        }
    }
    for (t, target) in cover.targets.iter().enumerate() {
        for p in &target.points {
            let pre: usize = cover
                .maps
                .iter()
                .filter(|m| m.target == t)
                .filter_map(|m| m.fiber_over(p))
                .map(|f| f.points.len())
                .sum();
            if pre != 2 {
                problems.push(format!("{}.{p} has {pre} preimages", target.name));
            }
        }
    }
    steps.push(step_from(
        "every target point and node has exactly two preimages",
        problems,
    ));

    let genera: Vec<u32> = cover.targets.iter().map(|t| t.genus).collect();
    let edges: Vec<(usize, usize)> = cover
        .target_nodes
        .iter()
        .map(|n| (n.a.component, n.b.component))
        .collect();
    let target_genus = graph_genus(&genera, &edges);
    steps.push(
        Step::new("target is connected", target_genus.is_some())
            .with_detail(format!("arithmetic genus {:?}", target_genus)),
    );
    let rh = target_genus
        .is_some_and(|gt| Count::from(2u32) * source_genus + 2u32 == Count::from(4 * gt));
    steps.push(
        Step::new("2 g(source) - 2 = 2 (2 g(target) - 2)", rh).with_detail(format!(
            "source genus {source_genus}, target genus {}",
            target_genus.map_or("?".to_string(), |g| g.to_string())
        )),
    );
    DoubleCoverReport {
        report: VerificationReport {
            subject: cover.name.clone(),
            steps,
        },
        target_genus,
        source_genus: source_genus.clone(),
    }
}

/// Arithmetic genus of the source of a cover from its dual graph.
pub fn source_genus(cover: &CoverData) -> Option<u64> {
    let genera: Vec<u32> = cover.sources.iter().map(|s| s.genus).collect();
    let edges: Vec<(usize, usize)> = cover
        .source_nodes
        .iter()
        .map(|n| (n.a.component, n.b.component))
        .collect();
    graph_genus(&genera, &edges)
}
