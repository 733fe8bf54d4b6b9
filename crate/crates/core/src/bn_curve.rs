//! The degenerate Brill-Noether curve `W^1_{a+2}` as a nodal curve.
//!
//! Every component is a copy of one elliptic curve of the chain, so the
//! arithmetic genus is `nu * 1 + delta - nu + 1 = delta + 1`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain_model::{component_ids, propagate, BNComponentId, Bundle, ChainSpec};
use crate::combinatorics::{catalan, factorial, Count};
use crate::error::CurveError;

/// Largest `a` built without an explicit override.
pub const DEFAULT_MAX_A: u32 = 6;

/// Where two components meet: the fixed offsets each one sees on the other's
/// free slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Meeting {
    /// Offset `u` on the first component, i.e. the point `O(uP + (d-u)Q)`.
    pub x_offset: u32,
    pub y_offset: u32,
}

/// A node of the curve, stored with `x < y` as indices into the component list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntersectionNode {
    pub x: usize,
    pub x_offset: u32,
    pub y: usize,
    pub y_offset: u32,
}

impl IntersectionNode {
    /// Offset on `component` and the component at the other end.
    pub fn endpoint(&self, component: usize) -> Option<(u32, usize)> {
        if component == self.x {
            Some((self.x_offset, self.y))
        } else if component == self.y {
            Some((self.y_offset, self.x))
        } else {
            None
        }
    }
}

fn meet(bx: &[Bundle], mx: u32, by: &[Bundle], my: u32) -> Option<Meeting> {
    if mx == my {
        return None;
    }
    let agree = bx.iter().zip(by).all(|pair| match pair {
        (Bundle::Fixed(p), Bundle::Fixed(q)) => p == q,
        _ => true,
    });
    if !agree {
        return None;
    }
    let x_offset = by[mx as usize - 1].fixed_offset()?;
    let y_offset = bx[my as usize - 1].fixed_offset()?;
    Some(Meeting { x_offset, y_offset })
}

/// Two components meet iff their bundle tuples agree wherever both are fixed.
pub fn intersect(
    chain: &ChainSpec,
    x: &BNComponentId,
    y: &BNComponentId,
) -> Result<Option<Meeting>, CurveError> {
    let bx = propagate(chain, x)?.bundles;
    let by = propagate(chain, y)?.bundles;
    Ok(meet(&bx, x.marked, &by, y.marked))
}

#[derive(Debug, Clone)]
pub struct BNCurveGraph {
    pub a: u32,
    pub chain: ChainSpec,
    /// Sorted by (word, marked).
    pub components: Vec<BNComponentId>,
    pub bundles: Vec<Vec<Bundle>>,
    pub nodes: Vec<IntersectionNode>,
}

impl BNCurveGraph {
    pub fn nu(&self) -> Count {
        Count::from(self.components.len())
    }

    pub fn delta(&self) -> Count {
        Count::from(self.nodes.len())
    }

    pub fn index_of(&self, id: &BNComponentId) -> Option<usize> {
        self.components.binary_search(id).ok()
    }

    /// Nodes on `component` as `(other component, offset on this one)`.
    pub fn incident(&self, component: usize) -> Vec<(usize, u32)> {
        self.nodes
            .iter()
            .filter_map(|n| n.endpoint(component).map(|(off, other)| (other, off)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.components.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for node in &self.nodes {
            adj[node.x].push(node.y);
            adj[node.y].push(node.x);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }
}

/// Builds every component and every pairwise intersection.
///
/// The pair scan is quadratic in `nu`; `a > DEFAULT_MAX_A` needs `allow_large`.
pub fn build_bn_curve(a: u32, allow_large: bool) -> Result<BNCurveGraph, CurveError> {
    if a == 0 {
        return Err(CurveError::ZeroParameter);
    }
    if a > DEFAULT_MAX_A && !allow_large {
        return Err(CurveError::GuardExceeded {
            a,
            max: DEFAULT_MAX_A,
        });
    }
    let chain = ChainSpec::rho_one(a)?;
    let components = component_ids(&chain)?;
    let bundles = components
        .iter()
        .map(|id| propagate(&chain, id).map(|p| p.bundles))
        .collect::<Result<Vec<_>, _>>()?;
    let n = components.len();
    let nodes: Vec<IntersectionNode> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (components, bundles) = (&components, &bundles);
            (i + 1..n).filter_map(move |j| {
                meet(
                    &bundles[i],
                    components[i].marked,
                    &bundles[j],
                    components[j].marked,
                )
                .map(|m| IntersectionNode {
                    x: i,
                    x_offset: m.x_offset,
                    y: j,
                    y_offset: m.y_offset,
                })
            })
        })
        .collect();
    Ok(BNCurveGraph {
        a,
        chain,
        components,
        bundles,
        nodes,
    })
}

/// `delta = 2((2a+1) c_a - c_{a+1})`.
pub fn delta_closed(a: u32) -> Count {
    let twice = Count::from(2u32);
    twice * (Count::from(2 * a + 1) * catalan(a) - catalan(a + 1))
}

/// `delta` before the Catalan recursion is applied:
/// `2((a-1) c_a - sum_{k=1}^{a-1} c_k c_{a-k}) + (g-1) c_a`.
pub fn delta_unsimplified(a: u32) -> Count {
    let ca = BigInt::from(catalan(a));
    let sum: BigInt = (1..a)
        .map(|k| BigInt::from(catalan(k) * catalan(a - k)))
        .sum();
    let non_adjacent = BigInt::from(2) * (BigInt::from(a as i64 - 1) * &ca - sum);
    let adjacent = BigInt::from(2 * a) * &ca;
    (non_adjacent + adjacent)
        .to_biguint()
        .expect("node count is nonnegative")
}

/// `1 + 2a(2a+1) c_a / (a+2)`; the division is exact.
pub fn genus_closed(a: u32) -> Count {
    let num = Count::from(2 * a) * Count::from(2 * a + 1) * catalan(a);
    let (q, r) = num.div_rem(&Count::from(a + 2));
    assert!(r.is_zero(), "2a(2a+1) c_a is not divisible by a+2 at a={a}");
    q + 1u32
}

/// Arithmetic genus `sum g_i + delta - nu + 1` of the graph, all `g_i = 1`.
pub fn genus_from_graph(graph: &BNCurveGraph) -> Result<Count, CurveError> {
    if !graph.is_connected() {
        return Err(CurveError::Disconnected);
    }
    let nu = graph.nu();
    let sum_genera = nu.clone();
    Ok(sum_genera + graph.delta() + 1u32 - nu)
}

/// The classical closed genus formula for `W^r_d`, evaluated exactly as
/// `1 + (g-d+r)/(g-d+2r+1) * prod_{i=0}^r i!/(g-d+r+i)! * g!`.
///
/// Reported alongside [`genus_closed`] for comparison only; at `(5,1,4)` and
/// `(3,1,3)` the two disagree.
pub fn eh_formula(g: i64, r: i64, d: i64) -> Result<BigRational, CurveError> {
    let undefined = CurveError::FormulaUndefined { g, r, d };
    let k = g - d + r;
    if g < 0 || r < 0 || k < 0 || k + r + 1 == 0 {
        return Err(undefined);
    }
    let big = |n: i64| BigInt::from(n);
    let fact = |n: i64| BigInt::from(factorial(n as u64));
    let mut value = BigRational::new(big(k), big(k + r + 1));
    for i in 0..=r {
        value *= BigRational::new(fact(i), fact(k + i));
    }
    value *= BigRational::from_integer(fact(g));
    Ok(value + BigRational::one())
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when the rational is a nonnegative integer equal to `count`.
pub fn rational_equals_count(q: &BigRational, count: &Count) -> bool {
    q.is_integer() && !q.is_negative() && q.numer().to_biguint().as_ref() == Some(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProfileEntry {
    pub neighbor: usize,
    pub offset: u32,
}

/// Intersection points on one component, ordered by neighbor index.
pub fn component_profile(graph: &BNCurveGraph, component: usize) -> Vec<ProfileEntry> {
    let mut entries: Vec<ProfileEntry> = graph
        .incident(component)
        .into_iter()
        .map(|(neighbor, offset)| ProfileEntry { neighbor, offset })
        .collect();
    entries.sort_by_key(|e| e.neighbor);
    entries
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, CurveError> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(CurveError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct JsonComponent {
    id: String,
    sequence: Vec<u8>,
    marked: u32,
}

#[derive(Serialize)]
struct JsonNode {
    x: String,
    x_offset: u32,
    y: String,
    y_offset: u32,
}

#[derive(Serialize)]
struct JsonGraph {
    a: u32,
    g: u32,
    d: u32,
    #[serde(with = "crate::serde_count")]
    nu: Count,
    #[serde(with = "crate::serde_count")]
    delta: Count,
    #[serde(with = "crate::serde_count")]
    genus: Count,
    #[serde(with = "crate::serde_count")]
    genus_closed: Count,
    eh_formula: String,
    eh_discrepancy: bool,
    components: Vec<JsonComponent>,
    nodes: Vec<JsonNode>,
}

pub fn export_graph(graph: &BNCurveGraph, format: &str) -> Result<String, CurveError> {
    match format.parse::<ExportFormat>()? {
        ExportFormat::Dot => Ok(to_dot(graph)),
        ExportFormat::Json => to_json(graph),
    }
}

fn to_dot(graph: &BNCurveGraph) -> String {
    let mut out = format!("graph W1_{} {{\n", graph.a + 2);
    for id in &graph.components {
        let label = id.label();
        let _ = writeln!(out, "  \"{label}\" [label=\"{label}\"];");
    }
    for n in &graph.nodes {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [label=\"{},{}\"];",
            graph.components[n.x].label(),
            graph.components[n.y].label(),
            n.x_offset,
            n.y_offset
        );
    }
    out.push_str("}\n");
    out
}

/// Graph genus, closed genus and the classical formula side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusCrossCheck {
    #[serde(with = "crate::serde_count")]
    pub graph: Count,
    #[serde(with = "crate::serde_count")]
    pub closed: Count,
    pub eh_formula: String,
    /// True when the classical formula differs from the graph genus.
    pub eh_discrepancy: bool,
}

impl GenusCrossCheck {
    /// Graph and closed genus agree; the classical formula is informational.
    pub fn consistent(&self) -> bool {
        self.graph == self.closed
    }
}

pub fn genus_cross_check(graph: &BNCurveGraph) -> Result<GenusCrossCheck, CurveError> {
    let genus = genus_from_graph(graph)?;
    let c = graph.chain;
    let eh = eh_formula(c.g.into(), c.r.into(), c.d.into())?;
    Ok(GenusCrossCheck {
        eh_discrepancy: !rational_equals_count(&eh, &genus),
        eh_formula: format_rational(&eh),
        closed: genus_closed(graph.a),
        graph: genus,
    })
}

fn to_json(graph: &BNCurveGraph) -> Result<String, CurveError> {
    let check = genus_cross_check(graph)?;
    let doc = JsonGraph {
        a: graph.a,
        g: graph.chain.g,
        d: graph.chain.d,
        nu: graph.nu(),
        delta: graph.delta(),
        genus: check.graph,
        genus_closed: check.closed,
        eh_formula: check.eh_formula,
        eh_discrepancy: check.eh_discrepancy,
        components: graph
            .components
            .iter()
            .map(|id| JsonComponent {
                id: id.label(),
                sequence: id.sequence.symbols().to_vec(),
                marked: id.marked,
            })
            .collect(),
        nodes: graph
            .nodes
            .iter()
            .map(|n| JsonNode {
                x: graph.components[n.x].label(),
                x_offset: n.x_offset,
                y: graph.components[n.y].label(),
                y_offset: n.y_offset,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("graph serializes") + "\n")
}
