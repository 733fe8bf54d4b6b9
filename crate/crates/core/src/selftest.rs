//! Numbered consistency checks over the whole library.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bn_curve::{
    build_bn_curve, component_profile, delta_closed, delta_unsimplified, eh_formula, export_graph,
    format_rational, genus_closed, genus_from_graph, rational_equals_count, BNCurveGraph,
};
use crate::chain_model::{
    component_ids, component_tables, exhaustive_search, limit_series_census, rho, trajectory,
    BNComponentId, Census, ChainSpec,
};
use crate::combinatorics::{catalan, enumerate_ballot, generalized_catalan, Count};
use crate::gonality5::{
    build_degree6_cover, build_double_cover, build_w14_circuit, exclude_degree, gonality,
    lin_equiv, verify_cover, verify_double_cover, Divisor, MarkedPoint,
};

/// Columns of the two component tables of the genus-5, degree-4 chain.
pub const G5_D4_GOLDEN: &str = include_str!("../data/g5_d4_columns.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `a` for graph-based checks.
    pub max_a: u32,
    /// Largest `a` for the component census.
    pub census_max_a: u32,
    /// Largest genus in the emptiness search.
    pub emptiness_max_g: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_a: 6,
            census_max_a: 8,
            emptiness_max_g: 9,
        }
    }
}

impl Bounds {
    /// Scales every bound down with `max_a`.
    pub fn with_max_a(max_a: u32) -> Self {
        let d = Self::default();
        Self {
            max_a,
            census_max_a: d.census_max_a.min(max_a + 2),
            emptiness_max_g: d.emptiness_max_g.min(2 * max_a + 1),
        }
    }
}

/// Deliberate corruptions used to check that the suite notices them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Replace `catalan(5) = 42` by 41.
    pub corrupt_catalan5: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "ser_ms")]
    pub elapsed: Duration,
}

fn ser_ms<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {}: {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_millis()
        )
    }
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(id: u32, name: &'static str, f: impl FnOnce() -> Outcome) -> CriterionResult {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

/// Runs criteria against shared state (built graphs, fault switches).
pub struct Suite {
    pub bounds: Bounds,
    pub faults: Faults,
    graphs: Vec<BNCurveGraph>,
    graph_error: Option<String>,
}

impl Suite {
    pub fn new(bounds: Bounds, faults: Faults) -> Self {
        Self {
            bounds,
            faults,
            graphs: Vec::new(),
            graph_error: None,
        }
    }

    fn catalan(&self, a: u32) -> Count {
        if self.faults.corrupt_catalan5 && a == 5 {
            Count::from(41u32)
        } else {
            catalan(a)
        }
    }

    fn graphs(&mut self) -> Result<&[BNCurveGraph], String> {
        if self.graphs.is_empty() && self.graph_error.is_none() {
            for a in 1..=self.bounds.max_a {
                match build_bn_curve(a, true) {
                    Ok(g) => self.graphs.push(g),
                    Err(e) => {
                        self.graph_error = Some(format!("a={a}: {e}"));
                        break;
                    }
                }
            }
        }
        match &self.graph_error {
            Some(e) => Err(e.clone()),
            None => Ok(&self.graphs),
        }
    }

    /// Component count `nu = (2a+1) c_a`.
    pub fn criterion1(&mut self) -> CriterionResult {
        let max = self.bounds.census_max_a;
        timed(1, "component count", || {
            for a in 1..=max {
                let g = 2 * a + 1;
                let census = limit_series_census(g, 1, a + 2).map_err(|e| e.to_string())?;
                let expected = Count::from(g) * self.catalan(a);
                ensure(census == Census::Curve(expected.clone()), || {
                    format!("a={a}: census {census:?}, expected {expected}")
                })?;
                let ids = component_ids(&ChainSpec::rho_one(a).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure(Count::from(ids.len()) == expected, || {
                    format!(
                        "a={a}: {} enumerated components, expected {expected}",
                        ids.len()
                    )
                })?;
            }
            let names: Vec<String> = component_ids(&ChainSpec::rho_one(2).unwrap())
                .unwrap()
                .iter()
                .map(crate::gonality5::circuit::conventional_name)
                .collect();
            let mut want: Vec<String> = (1..=5)
                .flat_map(|i| [format!("C'{i}"), format!("C''{i}")])
                .collect();
            let mut got = names.clone();
            want.sort();
            got.sort();
            ensure(got == want, || format!("a=2 components {names:?}"))?;
            Ok(format!("a=1..{max} match (2a+1) c_a; a=2 gives C'1..C''5"))
        })
    }

    /// Node count from the pair scan against both closed forms.
    pub fn criterion2(&mut self) -> CriterionResult {
        let start = Instant::now();
        let built = self.graphs().map(|_| ());
        let max = self.bounds.max_a;
        let graphs = &self.graphs;
        let mut r = timed(2, "node count", || {
            built?;
            for g in graphs {
                let a = g.a;
                let closed = delta_closed(a);
                ensure(g.delta() == closed, || {
                    format!("a={a}: scan {} vs closed {closed}", g.delta())
                })?;
                ensure(g.delta() == delta_unsimplified(a), || {
                    format!(
                        "a={a}: scan {} vs unsimplified {}",
                        g.delta(),
                        delta_unsimplified(a)
                    )
                })?;
            }
            Ok(format!("a=1..{max}: delta equals both closed forms"))
        });
        r.elapsed = start.elapsed();
        r
    }

    /// Graph genus `delta + 1` against the closed genus formula.
    pub fn criterion3(&mut self) -> CriterionResult {
        let built = self.graphs().map(|_| ());
        let graphs = &self.graphs;
        let max = self.bounds.max_a;
        timed(3, "genus", || {
            built?;
            for g in graphs {
                let a = g.a;
                let genus = genus_from_graph(g).map_err(|e| e.to_string())?;
                let closed = genus_closed(a);
                ensure(genus == g.delta() + 1u32, || {
                    format!("a={a}: genus {genus} != delta + 1")
                })?;
                ensure(genus == closed, || {
                    format!("a={a}: graph genus {genus} vs closed {closed}")
                })?;
                if a == 2 {
                    ensure(genus == Count::from(11u32), || format!("a=2 genus {genus}"))?;
                }
            }
            Ok(format!(
                "a=1..{max}: graph genus = delta + 1 = closed form; a=2 gives 11"
            ))
        })
    }

    /// The classical closed formula disagrees with the graph genus.
    pub fn criterion4(&mut self) -> CriterionResult {
        timed(4, "formula discrepancy", || {
            let mut parts = Vec::new();
            for (g, d, a, want) in [(5i64, 4i64, 2u32, 6u32), (3, 3, 1, 2)] {
                let q = eh_formula(g, 1, d).map_err(|e| e.to_string())?;
                let closed = genus_closed(a);
                ensure(rational_equals_count(&q, &Count::from(want)), || {
                    format!("eh({g},1,{d}) = {}, expected {want}", format_rational(&q))
                })?;
                ensure(!rational_equals_count(&q, &closed), || {
                    format!("eh({g},1,{d}) agrees with genus {closed}; no discrepancy")
                })?;
                parts.push(format!(
                    "eh({g},1,{d})={} vs genus {closed}",
                    format_rational(&q)
                ));
            }
            Ok(parts.join(", "))
        })
    }

    /// Castelnuovo counts by enumeration, chain search and product formula.
    pub fn criterion5(&mut self) -> CriterionResult {
        let cases: Vec<(u32, u32)> = (1..=8)
            .map(|a| (a, 1))
            .chain((1..=4).map(|a| (a, 2)))
            .chain((1..=3).map(|a| (a, 3)))
            .collect();
        timed(5, "Castelnuovo counts", || {
            ensure(generalized_catalan(2, 3) == Count::from(5u32), || {
                "c_{2,3} != 5".into()
            })?;
            for &(a, r) in &cases {
                let m = r + 1;
                let formula = if m == 2 {
                    self.catalan(a)
                } else {
                    generalized_catalan(a, m)
                };
                let enumerated = Count::from(enumerate_ballot(a, m).count());
                ensure(enumerated == formula, || {
                    format!("a={a} r={r}: {enumerated} sequences, formula {formula}")
                })?;
                let (g, d) = (a * m, r * (a + 1));
                let census = limit_series_census(g, r, d).map_err(|e| e.to_string())?;
                ensure(census == Census::Finite(formula.clone()), || {
                    format!("a={a} r={r}: census {census:?}")
                })?;
                if g >= 2 {
                    let chain = ChainSpec::new(g, r, d).map_err(|e| e.to_string())?;
                    let found = Count::from(exhaustive_search(&chain).valid());
                    ensure(found == formula, || {
                        format!("a={a} r={r}: chain search found {found}, formula {formula}")
                    })?;
                }
            }
            Ok(format!("{} cases, c_{{2,3}} = 5", cases.len()))
        })
    }

    /// Component tables of the genus-5 degree-4 chain against the golden file.
    pub fn criterion6(&mut self) -> CriterionResult {
        timed(6, "table fidelity", || check_tables_against(G5_D4_GOLDEN))
    }

    /// Nodal structure of the curve.
    pub fn criterion7(&mut self) -> CriterionResult {
        let built = self.graphs().map(|_| ());
        let graphs = &self.graphs;
        let max = self.bounds.max_a.min(5);
        timed(7, "nodal properties", || {
            built?;
            for g in graphs.iter().filter(|g| g.a <= max) {
                check_nodal(g)?;
            }
            Ok(format!(
                "a=1..{max}: <= 4 distinct points per component, (g-1) c_a adjacency nodes"
            ))
        })
    }

    /// No limit series with negative Brill-Noether number.
    pub fn criterion8(&mut self) -> CriterionResult {
        let max_g = self.bounds.emptiness_max_g;
        timed(8, "Brill-Noether emptiness", || {
            let mut cases = 0u64;
            let mut visited = 0u64;
            for g in 2..=max_g {
                for r in 1..=g {
                    let mut d = 1;
                    while rho(g.into(), r.into(), d.into()) < 0 {
                        let chain = ChainSpec::new(g, r, d).map_err(|e| e.to_string())?;
                        let s = exhaustive_search(&chain);
                        ensure(s.valid() == 0, || {
                            format!("(g,r,d)=({g},{r},{d}): {} configurations", s.valid())
                        })?;
                        ensure(limit_series_census(g, r, d) == Ok(Census::Empty), || {
                            format!("(g,r,d)=({g},{r},{d}): census not empty")
                        })?;
                        cases += 1;
                        visited += s.visited;
                        d += 1;
                    }
                }
            }
            Ok(format!("{cases} triples with g<={max_g}, r<=g: none realized ({visited} partial configurations)"))
        })
    }

    /// The gonality pipeline.
    pub fn criterion9(&mut self) -> CriterionResult {
        timed(9, "gonality pipeline", || {
            let circuit = build_w14_circuit().map_err(|e| e.to_string())?;
            let mut calls = 0;
            for deg in 1..=5 {
                let t = exclude_degree(&circuit, deg).map_err(|e| e.to_string())?;
                ensure(t.holds(), || format!("degree {deg}: {}", t.conclusion))?;
                ensure(t.oracle_call_count() > 0, || {
                    format!("degree {deg}: no oracle calls")
                })?;
                calls += t.oracle_call_count();
            }
            let cover = build_degree6_cover(&circuit).map_err(|e| e.to_string())?;
            let report = verify_cover(&cover);
            ensure(report.passed(), || {
                format!("degree-6 cover: {:?}", report.first_failure())
            })?;
            let double = build_double_cover(&circuit).map_err(|e| e.to_string())?;
            let genus = genus_from_graph(&circuit.graph).map_err(|e| e.to_string())?;
            let dr = verify_double_cover(&double, &genus);
            ensure(dr.report.passed(), || {
                format!("double cover: {:?}", dr.report.first_failure())
            })?;
            ensure(dr.target_genus == Some(6), || {
                format!("double cover target genus {:?}", dr.target_genus)
            })?;
            let gon = gonality().map_err(|e| e.to_string())?;
            ensure(gon.value == 6 && gon.lower_certificate.len() == 5, || {
                "gonality != 6".into()
            })?;
            Ok(format!(
                "degrees 1-5 excluded ({calls} oracle calls), degree-6 cover verified, double cover genus 11 -> 6, gonality = 6"
            ))
        })
    }

    /// Deterministic versions of the property suite.
    pub fn criterion10(&mut self) -> CriterionResult {
        let built = self.graphs().map(|_| ());
        let graphs = &self.graphs;
        let max = self.bounds.max_a.min(5);
        let cat = |a: u32| self.catalan(a);
        timed(10, "property suite", || {
            built?;
            for n in 0..15u32 {
                let rec: Count = (0..=n).map(|k| cat(k) * cat(n - k)).sum();
                ensure(cat(n + 1) == rec, || {
                    format!("Catalan recursion fails at {}", n + 1)
                })?;
            }
            for a in 1..=max {
                check_injective(&ChainSpec::rho_one(a).unwrap())?;
            }
            check_oracle_laws()?;
            for g in graphs.iter().filter(|g| g.a <= max) {
                for f in ["json", "dot"] {
                    let once = export_graph(g, f).map_err(|e| e.to_string())?;
                    let rebuilt = build_bn_curve(g.a, true).map_err(|e| e.to_string())?;
                    let twice = export_graph(&rebuilt, f).map_err(|e| e.to_string())?;
                    ensure(once == twice, || {
                        format!("a={} {f} export is not deterministic", g.a)
                    })?;
                }
            }
            Ok(format!(
                "Catalan recursion, injectivity a<={max}, oracle laws, export determinism"
            ))
        })
    }

    pub fn run_all(&mut self) -> Vec<CriterionResult> {
        vec![
            self.criterion1(),
            self.criterion2(),
            self.criterion3(),
            self.criterion4(),
            self.criterion5(),
            self.criterion6(),
            self.criterion7(),
            self.criterion8(),
            self.criterion9(),
            self.criterion10(),
        ]
    }
}

/// Compares `component_tables(5, 1, 4)` with a golden CSV holding one line
/// per component: `label,row1,...,row5`.
pub fn check_tables_against(golden: &str) -> Outcome {
    let chain = ChainSpec::new(5, 1, 4).map_err(|e| e.to_string())?;
    let table = component_tables(&chain).map_err(|e| e.to_string())?;
    let mut lines = golden.lines().filter(|l| !l.trim().is_empty());
    lines.next().ok_or("empty golden file")?;
    let mut seen = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let label = fields[0];
        let column = table
            .columns
            .iter()
            .find(|c| c.id.label() == label)
            .ok_or_else(|| format!("no component {label}"))?;
        let rendered: Vec<String> = column.bundles.iter().map(|b| b.render(chain.d)).collect();
        ensure(rendered == fields[1..], || {
            format!("{label}: computed {rendered:?}, golden {:?}", &fields[1..])
        })?;
        seen += 1;
    }
    ensure(seen == table.columns.len(), || {
        format!("golden has {seen} columns, table {}", table.columns.len())
    })?;
    Ok(format!("{seen} columns match entry for entry"))
}

fn check_nodal(g: &BNCurveGraph) -> Result<(), String> {
    let a = g.a;
    for v in 0..g.components.len() {
        let prof = component_profile(g, v);
        ensure(prof.len() <= 4, || {
            format!("a={a}: {} has {} points", g.components[v], prof.len())
        })?;
        let offsets: HashSet<u32> = prof.iter().map(|e| e.offset).collect();
        ensure(offsets.len() == prof.len(), || {
            format!("a={a}: offsets repeat on {}", g.components[v])
        })?;
    }
    let mut adjacent = 0u64;
    for seq in enumerate_ballot(a, 2) {
        for i in 1..g.chain.g {
            let x = g.index_of(&BNComponentId::new(seq.clone(), i));
            let y = g.index_of(&BNComponentId::new(seq.clone(), i + 1));
            let (Some(x), Some(y)) = (x, y) else {
                return Err(format!("a={a}: {seq}|{i} missing"));
            };
            ensure(
                g.nodes.iter().any(|n| (n.x, n.y) == (x.min(y), x.max(y))),
                || format!("a={a}: no node between {seq}|{i} and {seq}|{}", i + 1),
            )?;
            adjacent += 1;
        }
    }
    let expected = Count::from(g.chain.g - 1) * catalan(a);
    ensure(Count::from(adjacent) == expected, || {
        format!("a={a}: {adjacent} adjacency nodes, expected {expected}")
    })
}

/// Distinct components have distinct bundle tuples.
pub fn check_injective(chain: &ChainSpec) -> Result<(), String> {
    let mut seen = HashSet::new();
    for id in component_ids(chain).map_err(|e| e.to_string())? {
        let t = trajectory(chain, &id.choices()).map_err(|e| e.to_string())?;
        ensure(seen.insert(t.bundles), || {
            format!("{id} repeats a bundle tuple")
        })?;
    }
    Ok(())
}

/// Reflexivity, symmetry and transitivity of the oracle on every divisor of
/// degree <= 3 supported on `X, Y, Z` of `C'2`.
pub fn check_oracle_laws() -> Result<(), String> {
    let (x, y, z) = (
        MarkedPoint::from_offset("C'2", "X", 1, 2, 0),
        MarkedPoint::y("C'2"),
        MarkedPoint::z("C'2"),
    );
    let mut all = Vec::new();
    for deg in 1..=3u32 {
        for i in 0..=deg {
            for j in 0..=deg - i {
                let mut d = Divisor::new("C'2");
                for (p, m) in [(&x, i), (&y, j), (&z, deg - i - j)] {
                    if m > 0 {
                        d = d.plus(p, m);
                    }
                }
                all.push(d);
            }
        }
    }
    let eq = |p: &Divisor, q: &Divisor| lin_equiv(p, q).map_err(|e| e.to_string());
    for p in &all {
        ensure(eq(p, p)?, || format!("{p} is not equivalent to itself"))?;
        for q in &all {
            ensure(eq(p, q)? == eq(q, p)?, || {
                format!("symmetry fails for {p}, {q}")
            })?;
            if eq(p, q)? {
                for s in &all {
                    if eq(q, s)? {
                        ensure(eq(p, s)?, || {
                            format!("transitivity fails for {p}, {q}, {s}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Fixed-width pass/fail table.
pub fn render_table(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(out, "{}", r.line());
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", results.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let mut s = Suite::new(Bounds::with_max_a(3), Faults::default());
        for r in s.run_all() {
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn corrupted_catalan_is_detected() {
        let mut s = Suite::new(
            Bounds::with_max_a(3),
            Faults {
                corrupt_catalan5: true,
            },
        );
        let results = s.run_all();
        assert!(!results[0].passed);
        assert!(results.iter().any(|r| r.id == 5 && !r.passed));
    }

    #[test]
    fn golden_mismatch_reported() {
        let broken = G5_D4_GOLDEN.replace("1212|2,4Q,L,3P+Q", "1212|2,4Q,L,2P+2Q");
        let err = check_tables_against(&broken).unwrap_err();
        assert!(err.starts_with("1212|2"), "{err}");
    }
}
