//! Gonality of the genus-11 curve `W^1_4` on a general genus-5 chain.
//!
//! The lower bound excludes admissible covers of degree 1 to 5 by checked
//! case analysis; the upper bound is an explicit degree-6 admissible cover.

pub mod circuit;
pub mod cover;
pub mod divisor;
pub mod exclusion;
pub mod trace;

use serde::Serialize;

pub use circuit::{build_w14_circuit, max_ramified_nodes, CircuitGraph, Role};
pub use cover::{
    build_degree6_cover, build_double_cover, verify_cover, verify_double_cover, CoverData,
};
pub use divisor::{lin_equiv, Divisor, MarkedPoint, PointClass};
pub use exclusion::exclude_degree;
pub use trace::{OracleCall, ProofTrace, Step, Verdict, VerificationReport};

use crate::error::GonalityError;

#[derive(Debug, Clone, Serialize)]
pub struct Gonality {
    pub value: u32,
    pub lower_certificate: Vec<ProofTrace>,
    pub upper_certificate: VerificationReport,
}

/// Runs the full pipeline; every sub-check must pass.
pub fn gonality() -> Result<Gonality, GonalityError> {
    let circuit = build_w14_circuit()?;
    let mut lower = Vec::with_capacity(5);
    for deg in 1..=5 {
        let trace = exclude_degree(&circuit, deg)?;
        if !trace.holds() {
            return Err(GonalityError::CheckFailed(trace.conclusion));
        }
        lower.push(trace);
    }
    let cover = build_degree6_cover(&circuit)?;
    let report = verify_cover(&cover);
    if let Some(step) = report.first_failure() {
        return Err(GonalityError::CheckFailed(format!(
            "{}: {}",
            report.subject, step.claim
        )));
    }
    if cover::cover_degree(&cover) != Some(6) {
        return Err(GonalityError::CheckFailed(
            "upper cover does not have degree 6".into(),
        ));
    }
    Ok(Gonality {
        value: 6,
        lower_certificate: lower,
        upper_certificate: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gonality_is_six() {
        let g = gonality().unwrap();
        assert_eq!(g.value, 6);
        assert_eq!(g.lower_certificate.len(), 5);
        assert!(g.upper_certificate.passed());
    }

    #[test]
    fn circuit_matches_graph_node_for_node() {
        let c = build_w14_circuit().unwrap();
        let mut from_circuit: Vec<(usize, u32, usize, u32)> = Vec::new();
        for n in &c.cycle_nodes {
            let (l, r) = (&c.circuit[n.left], &c.circuit[n.right]);
            let lo = l.point(n.left_role).unwrap().offset;
            let ro = r.point(n.right_role).unwrap().offset;
            from_circuit.push((l.graph_index, lo, r.graph_index, ro));
        }
        for t in &c.tails {
            let carrier = &c.circuit[t.attached_to];
            from_circuit.push((
                t.graph_index,
                t.offset,
                carrier.graph_index,
                carrier.point(Role::X).unwrap().offset,
            ));
        }
        let mut a: Vec<_> = from_circuit
            .into_iter()
            .map(|(x, xo, y, yo)| {
                if x < y {
                    (x, xo, y, yo)
                } else {
                    (y, yo, x, xo)
                }
            })
            .collect();
        a.sort();
        let mut b: Vec<_> = c
            .graph
            .nodes
            .iter()
            .map(|n| (n.x, n.x_offset, n.y, n.y_offset))
            .collect();
        b.sort();
        assert_eq!(a, b);
    }
}
