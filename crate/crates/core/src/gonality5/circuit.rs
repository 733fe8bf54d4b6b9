//! The six-component circuit of `W^1_4` on a genus-5 chain and its four tails.

use std::collections::BTreeSet;

use serde::Serialize;

use super::divisor::{Divisor, MarkedPoint};
use super::trace::{OracleCall, Step};
use crate::bn_curve::{build_bn_curve, BNCurveGraph};
use crate::chain_model::BNComponentId;
use crate::error::GonalityError;

/// Role of an intersection point on a circuit component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Role {
    /// Attachment of the tail.
    X,
    /// Circuit neighbor along the same word (or the lower neighbor when both are).
    Y,
    /// The other circuit neighbor.
    Z,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::X => "X",
            Role::Y => "Y",
            Role::Z => "Z",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitPoint {
    pub role: Role,
    pub offset: u32,
    /// Graph index of the component on the other side.
    pub neighbor: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitComponent {
    /// `D1` .. `D6`.
    pub label: String,
    /// Conventional name such as `C'2`.
    pub name: String,
    pub graph_index: usize,
    pub points: Vec<CircuitPoint>,
}

impl CircuitComponent {
    pub fn point(&self, role: Role) -> Option<&CircuitPoint> {
        self.points.iter().find(|p| p.role == role)
    }

    pub fn has_tail(&self) -> bool {
        self.point(Role::X).is_some()
    }

    pub fn role_towards(&self, neighbor: usize) -> Option<Role> {
        self.points
            .iter()
            .find(|p| p.neighbor == neighbor)
            .map(|p| p.role)
    }

    /// The marked point of given role with its class derived from offsets.
    pub fn marked_point(&self, role: Role) -> Option<MarkedPoint> {
        let uy = self.point(Role::Y)?.offset;
        let uz = self.point(Role::Z)?.offset;
        let p = self.point(role)?;
        Some(MarkedPoint::from_offset(
            &self.name,
            role.label(),
            p.offset,
            uy,
            uz,
        ))
    }

    /// `sum m_i role_i` as a divisor on this component.
    pub fn divisor(&self, terms: &[(Role, u32)]) -> Divisor {
        terms
            .iter()
            .fold(Divisor::new(&self.name), |d, &(role, m)| {
                d.plus(&self.marked_point(role).expect("role present"), m)
            })
    }
}

/// Node `n_i` joining `D_i` and `D_{i+1}` (indices modulo 6).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CycleNode {
    /// 0-based position `i` of `D_{i+1}`; the node joins positions `i` and `i+1 mod 6`.
    pub left: usize,
    pub right: usize,
    pub left_role: Role,
    pub right_role: Role,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tail {
    pub name: String,
    pub graph_index: usize,
    /// Position in the circuit of the component it hangs from.
    pub attached_to: usize,
    /// Offset of the node on the tail itself.
    pub offset: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitGraph {
    pub circuit: Vec<CircuitComponent>,
    pub cycle_nodes: Vec<CycleNode>,
    pub tails: Vec<Tail>,
    #[serde(skip)]
    pub graph: BNCurveGraph,
}

/// `C'i` for the word 1212 and `C''i` for 1122, `i` the free component.
pub fn conventional_name(id: &BNComponentId) -> String {
    match id.sequence.symbols() {
        [1, 2, 1, 2] => format!("C'{}", id.marked),
        [1, 1, 2, 2] => format!("C''{}", id.marked),
        _ => id.label(),
    }
}

fn inconsistent(msg: impl Into<String>) -> GonalityError {
    GonalityError::Inconsistent(msg.into())
}

/// Recovers the circuit and tails from the `a = 2` Brill-Noether graph.
///
/// The circuit is the 2-core of the graph; everything pruned from it must be
/// a single elliptic tail hanging off a circuit component. On each circuit
/// component carrying a tail the offsets must satisfy `2X = Y + Z`.
pub fn build_w14_circuit() -> Result<CircuitGraph, GonalityError> {
    let graph = build_bn_curve(2, false)?;
    let n = graph.components.len();
    if n != 10 || graph.nodes.len() != 10 {
        return Err(inconsistent(format!(
            "expected 10 components and 10 nodes, got {n} and {}",
            graph.nodes.len()
        )));
    }
    let incident: Vec<Vec<(usize, u32)>> = (0..n).map(|v| graph.incident(v)).collect();

    // 2-core
    let mut alive = vec![true; n];
    loop {
        let leaf =
            (0..n).find(|&v| alive[v] && incident[v].iter().filter(|(w, _)| alive[*w]).count() < 2);
        match leaf {
            Some(v) => alive[v] = false,
            None => break,
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if core.len() != 6 {
        return Err(inconsistent(format!(
            "circuit has {} components",
            core.len()
        )));
    }
    for &v in &core {
        if incident[v].iter().filter(|(w, _)| alive[*w]).count() != 2 {
            return Err(inconsistent("circuit is not a simple cycle"));
        }
    }

    // walk the cycle from C'2 towards C'3
    let name = |v: usize| conventional_name(&graph.components[v]);
    let start = core
        .iter()
        .copied()
        .find(|&v| name(v) == "C'2")
        .ok_or_else(|| inconsistent("C'2 is not on the circuit"))?;
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    loop {
        let mut next: Vec<usize> = incident[cur]
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| alive[w] && Some(w) != prev)
            .collect();
        next.sort_by_key(|&w| {
            (
                graph.components[w].sequence != graph.components[cur].sequence,
                w,
            )
        });
        let w = next[0];
        if w == start {
            break;
        }
        if order.contains(&w) || order.len() > 6 {
            return Err(inconsistent("cycle walk revisits a component"));
        }
        order.push(w);
        prev = Some(cur);
        cur = w;
    }
    if order.len() != 6 {
        return Err(inconsistent("cycle does not close after six components"));
    }

    let mut circuit = Vec::with_capacity(6);
    for (pos, &v) in order.iter().enumerate() {
        let id = &graph.components[v];
        let mut points = Vec::new();
        let in_core: Vec<(usize, u32)> = incident[v]
            .iter()
            .copied()
            .filter(|(w, _)| alive[*w])
            .collect();
        let tails: Vec<(usize, u32)> = incident[v]
            .iter()
            .copied()
            .filter(|(w, _)| !alive[*w])
            .collect();
        let (y, z) = {
            let same: Vec<_> = in_core
                .iter()
                .filter(|(w, _)| graph.components[*w].sequence == id.sequence)
                .collect();
            match same.len() {
                1 => {
                    let other = in_core
                        .iter()
                        .find(|p| p.0 != same[0].0)
                        .expect("two circuit neighbors");
                    (*same[0], *other)
                }
                2 => {
                    let (mut a, mut b) = (in_core[0], in_core[1]);
                    if graph.components[a.0].marked > graph.components[b.0].marked {
                        std::mem::swap(&mut a, &mut b);
                    }
                    (a, b)
                }
                _ => {
                    return Err(inconsistent(format!(
                        "{} has no circuit neighbor on its own word",
                        name(v)
                    )))
                }
            }
        };
        if y.1 == z.1 {
            return Err(inconsistent(format!("Y and Z coincide on {}", name(v))));
        }
        points.push(CircuitPoint {
            role: Role::Y,
            offset: y.1,
            neighbor: y.0,
        });
        points.push(CircuitPoint {
            role: Role::Z,
            offset: z.1,
            neighbor: z.0,
        });
        match tails.as_slice() {
            [] => {}
            [(w, off)] => {
                if 2 * off != y.1 + z.1 {
                    return Err(inconsistent(format!(
                        "2X != Y + Z on {}: offsets X={off}, Y={}, Z={}",
                        name(v),
                        y.1,
                        z.1
                    )));
                }
                points.push(CircuitPoint {
                    role: Role::X,
                    offset: *off,
                    neighbor: *w,
                });
            }
            _ => {
                return Err(inconsistent(format!(
                    "{} carries more than one tail",
                    name(v)
                )))
            }
        }
        circuit.push(CircuitComponent {
            label: format!("D{}", pos + 1),
            name: name(v),
            graph_index: v,
            points,
        });
    }

    let mut cycle_nodes = Vec::with_capacity(6);
    for left in 0..6 {
        let right = (left + 1) % 6;
        let (l, r) = (&circuit[left], &circuit[right]);
        let left_role = l
            .role_towards(r.graph_index)
            .ok_or_else(|| inconsistent("missing cycle node"))?;
        let right_role = r
            .role_towards(l.graph_index)
            .ok_or_else(|| inconsistent("missing cycle node"))?;
        if left_role == Role::X || right_role == Role::X {
            return Err(inconsistent("cycle node labelled as a tail point"));
        }
        cycle_nodes.push(CycleNode {
            left,
            right,
            left_role,
            right_role,
        });
    }

    let mut tails = Vec::new();
    for v in (0..n).filter(|&v| !alive[v]) {
        let [(w, offset)] = incident[v].as_slice() else {
            return Err(inconsistent(format!(
                "tail {} is not attached at a single point",
                name(v)
            )));
        };
        let attached_to = order.iter().position(|&c| c == *w).ok_or_else(|| {
            inconsistent(format!(
                "tail {} hangs off a non-circuit component",
                name(v)
            ))
        })?;
        tails.push(Tail {
            name: name(v),
            graph_index: v,
            attached_to,
            offset: *offset,
        });
    }
    if tails.len() != 4 {
        return Err(inconsistent(format!(
            "expected 4 tails, found {}",
            tails.len()
        )));
    }
    if cycle_nodes.len() + tails.len() != graph.nodes.len() {
        return Err(inconsistent(
            "circuit and tails do not account for every node",
        ));
    }
    let carriers: BTreeSet<usize> = tails.iter().map(|t| t.attached_to).collect();
    if carriers.len() != 4 || circuit.iter().filter(|c| c.has_tail()).count() != 4 {
        return Err(inconsistent(
            "tails are not attached to four distinct circuit components",
        ));
    }

    Ok(CircuitGraph {
        circuit,
        cycle_nodes,
        tails,
        graph,
    })
}

/// Least possible degree of a cover of the circuit ramified over `ram_count`
/// of its nodes: each elliptic component contributes 2, shared nodes are
/// counted twice, and every ramified node saves one more.
pub fn circuit_degree_bound(ram_count: u32) -> u32 {
    assert!(ram_count <= 6, "the circuit has six nodes");
    6 * 2 - 6 - ram_count
}

/// Outcome of [`max_ramified_nodes`].
#[derive(Debug, Clone, Serialize)]
pub struct RamificationBound {
    pub bound: u32,
    /// One step per circuit component showing `2Y` and `2Z` are not equivalent.
    pub certificate: Vec<Step>,
    /// Sets of cycle nodes (0-based `n_i` indices) realizing the bound.
    pub maximal_sets: Vec<Vec<usize>>,
}

impl CircuitGraph {
    /// Nodes of the cycle touching circuit position `pos`.
    pub fn nodes_at(&self, pos: usize) -> [usize; 2] {
        [(pos + 5) % 6, pos]
    }

    /// Role of node `n_i` on the given circuit component.
    pub fn node_role(&self, node: usize, pos: usize) -> Option<Role> {
        let n = &self.cycle_nodes[node];
        if n.left == pos {
            Some(n.left_role)
        } else if n.right == pos {
            Some(n.right_role)
        } else {
            None
        }
    }

    /// Sets of cycle nodes that can be simultaneously ramified, given which
    /// components may be ramified at both of their nodes.
    pub fn admissible_ramified_sets(&self, doubly_ramifiable: &[bool]) -> Vec<Vec<usize>> {
        (0u32..(1 << 6))
            .filter(|mask| {
                (0..6).all(|pos| {
                    let [a, b] = self.nodes_at(pos);
                    doubly_ramifiable[pos] || !(mask & (1 << a) != 0 && mask & (1 << b) != 0)
                })
            })
            .map(|mask| (0..6).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    }
}

/// At most three circuit nodes can be ramified.
///
/// A degree-2 map ramified at both circuit nodes `Y`, `Z` of a component has
/// `2Y` and `2Z` as fibers, forcing `2Y ~ 2Z`; the oracle refutes this on
/// every component. Each ramified node belongs to two components, so the
/// ramified nodes form a matching of the 6-cycle.
pub fn max_ramified_nodes(circuit: &CircuitGraph) -> Result<RamificationBound, GonalityError> {
    let mut certificate = Vec::with_capacity(6);
    let mut doubly = Vec::with_capacity(6);
    for c in &circuit.circuit {
        let call = OracleCall::run(&c.divisor(&[(Role::Y, 2)]), &c.divisor(&[(Role::Z, 2)]))?;
        let equivalent = call.equivalent;
        doubly.push(equivalent);
        certificate.push(
            Step::new(
                format!(
                    "{} ({}) cannot be ramified at both circuit nodes",
                    c.label, c.name
                ),
                !equivalent,
            )
            .with_calls(vec![call]),
        );
    }
    let sets = circuit.admissible_ramified_sets(&doubly);
    let bound = sets.iter().map(Vec::len).max().unwrap_or(0) as u32;
    let maximal_sets = sets
        .into_iter()
        .filter(|s| s.len() as u32 == bound)
        .collect();
    Ok(RamificationBound {
        bound,
        certificate,
        maximal_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_shape() {
        let c = build_w14_circuit().unwrap();
        let names: Vec<&str> = c.circuit.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["C'2", "C'3", "C'4", "C''2", "C''3", "C''4"]);
        let mut tails: Vec<&str> = c.tails.iter().map(|t| t.name.as_str()).collect();
        tails.sort();
        assert_eq!(tails, ["C''1", "C''5", "C'1", "C'5"]);
        // D6 closes the cycle back to D1
        assert_eq!((c.cycle_nodes[5].left, c.cycle_nodes[5].right), (5, 0));
        let two_valent: Vec<&str> = c
            .circuit
            .iter()
            .filter(|d| !d.has_tail())
            .map(|d| d.name.as_str())
            .collect();
        assert_eq!(two_valent, ["C'3", "C''3"]);
    }

    #[test]
    fn c2_prime_offsets() {
        let c = build_w14_circuit().unwrap();
        let d1 = &c.circuit[0];
        let off = |r| d1.point(r).unwrap().offset;
        assert_eq!((off(Role::X), off(Role::Y), off(Role::Z)), (1, 2, 0));
        let y_nb = &c.graph.components[d1.point(Role::Y).unwrap().neighbor];
        let z_nb = &c.graph.components[d1.point(Role::Z).unwrap().neighbor];
        assert_eq!(conventional_name(y_nb), "C'3");
        assert_eq!(conventional_name(z_nb), "C''4");
    }

    #[test]
    fn degree_bound() {
        assert_eq!(circuit_degree_bound(0), 6);
        assert_eq!(circuit_degree_bound(3), 3);
        assert_eq!(circuit_degree_bound(2), 4);
    }

    #[test]
    fn at_most_three_ramified_nodes() {
        let c = build_w14_circuit().unwrap();
        let b = max_ramified_nodes(&c).unwrap();
        assert_eq!(b.bound, 3);
        assert_eq!(b.certificate.len(), 6);
        assert!(b
            .certificate
            .iter()
            .all(|s| s.passed() && s.oracle_calls.len() == 1 && !s.oracle_calls[0].equivalent));
        assert_eq!(b.maximal_sets, vec![vec![0, 2, 4], vec![1, 3, 5]]);
    }
}
