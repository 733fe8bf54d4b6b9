//! Limit linear series on a chain of elliptic curves.
//!
//! Component `i` of the chain carries two generic points `P_i`, `Q_i`, with
//! `Q_i` glued to `P_{i+1}`. A limit `g^r_d` is described by the vanishing
//! sequence `u_0 < ... < u_r` at each `P_i`. On a component whose bundle is
//! `O(u_j P + (d - u_j) Q)` the `j`-th order is carried over unchanged to the
//! next component while every other order goes up by one; on a component with
//! an arbitrary ("free") bundle all orders go up by one. Points are generic, so
//! bundles of this shape are compared through `u` alone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{catalan, enumerate_ballot, generalized_catalan, BallotSequence, Count};
use crate::error::ChainError;

/// Brill-Noether number `g - (r+1)(g-d+r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// A chain of `g` elliptic curves carrying a degree-`d`, rank-`r` limit series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    pub g: u32,
    pub r: u32,
    pub d: u32,
}

impl ChainSpec {
    pub fn new(g: u32, r: u32, d: u32) -> Result<Self, ChainError> {
        if g < 2 {
            return Err(ChainError::InvalidChain(format!(
                "g={g} must be at least 2"
            )));
        }
        if r < 1 {
            return Err(ChainError::InvalidChain("r must be at least 1".into()));
        }
        if d < 1 {
            return Err(ChainError::InvalidChain("d must be at least 1".into()));
        }
        Ok(Self { g, r, d })
    }

    /// The `rho = 1` chain of the Brill-Noether curve `W^1_{a+2}`: `g = 2a+1`, `d = a+2`.
    pub fn rho_one(a: u32) -> Result<Self, ChainError> {
        if a == 0 {
            return Err(ChainError::InvalidChain("a must be at least 1".into()));
        }
        Self::new(2 * a + 1, 1, a + 2)
    }

    pub fn rho(&self) -> i64 {
        rho(self.g.into(), self.r.into(), self.d.into())
    }

    /// `a` when the chain is `g = 2a+1`, `d = a+2`, `r = 1`.
    pub fn rho_one_parameter(&self) -> Option<u32> {
        if self.r == 1 && self.g % 2 == 1 && self.g >= 3 && self.d == (self.g - 1) / 2 + 2 {
            Some((self.g - 1) / 2)
        } else {
            None
        }
    }

    fn require_rho_one(&self) -> Result<u32, ChainError> {
        self.rho_one_parameter().ok_or(ChainError::NotRhoOne {
            g: self.g,
            r: self.r,
            d: self.d,
        })
    }
}

/// Vanishing orders `u1 < u2` at the entry point `P_i` of a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VanishingState {
    pub u1: u32,
    pub u2: u32,
}

/// Line bundle on one elliptic component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bundle {
    /// `O(u P + (d - u) Q)`.
    Fixed(u32),
    /// Arbitrary degree-`d` bundle.
    Free,
}

impl Bundle {
    pub fn fixed_offset(self) -> Option<u32> {
        match self {
            Bundle::Fixed(u) => Some(u),
            Bundle::Free => None,
        }
    }

    /// Vanishing order at `Q` of the distinguished section; `None` on free components.
    pub fn q_order(self, d: u32) -> Option<u32> {
        self.fixed_offset().map(|u| d - u)
    }

    /// Renders as `aP+bQ`, dropping zero terms and unit coefficients, or `L`.
    pub fn render(self, d: u32) -> String {
        match self {
            Bundle::Free => "L".to_string(),
            Bundle::Fixed(u) => {
                let term = |c: u32, p: &str| match c {
                    0 => String::new(),
                    1 => p.to_string(),
                    c => format!("{c}{p}"),
                };
                let (p, q) = (term(u, "P"), term(d - u, "Q"));
                match (p.is_empty(), q.is_empty()) {
                    (false, false) => format!("{p}+{q}"),
                    (true, _) => q,
                    (_, true) => p,
                }
            }
        }
    }
}

/// What a limit series does on one component: keep the order with the given
/// 1-based index, or leave the bundle free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    Symbol(u8),
    Free,
}

/// An irreducible component of the degenerate Brill-Noether curve: an
/// admissible word of length `g - 1` plus the component of the chain whose
/// bundle varies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BNComponentId {
    pub sequence: BallotSequence,
    /// 1-based index of the free component.
    pub marked: u32,
}

impl BNComponentId {
    pub fn new(sequence: BallotSequence, marked: u32) -> Self {
        Self { sequence, marked }
    }

    /// Chain length this id describes.
    pub fn chain_length(&self) -> u32 {
        self.sequence.len() as u32 + 1
    }

    /// Per-component choices, with the sequence symbols laid over the
    /// unmarked components in chain order.
    pub fn choices(&self) -> Vec<Choice> {
        let mut symbols = self.sequence.symbols().iter().copied();
        (1..=self.chain_length())
            .map(|i| {
                if i == self.marked {
                    Choice::Free
                } else {
                    Choice::Symbol(symbols.next().expect("length checked by construction"))
                }
            })
            .collect()
    }

    /// Short label `"<word>|<marked>"`.
    pub fn label(&self) -> String {
        format!("{}|{}", self.sequence, self.marked)
    }
}

impl fmt::Display for BNComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Vanishing data and bundles of a general configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// Vanishing sequence at `P_i`, one entry per component.
    pub vanishing: Vec<Vec<u32>>,
    /// Vanishing sequence the last component hands on past `Q_g`.
    pub exit: Vec<u32>,
    pub bundles: Vec<Bundle>,
}

/// Propagates vanishing orders through an arbitrary configuration of choices.
///
/// Fails if the orders stop being strictly increasing or if the end of the
/// chain cannot satisfy `v^g_j >= j`, i.e. if the configuration is not a
/// refined limit series.
pub fn trajectory(chain: &ChainSpec, choices: &[Choice]) -> Result<Trajectory, ChainError> {
    if choices.len() != chain.g as usize {
        return Err(ChainError::InvalidConfiguration(format!(
            "{} choices for a chain of {} components",
            choices.len(),
            chain.g
        )));
    }
    let rank = chain.r as usize;
    let mut u: Vec<u32> = (0..=chain.r).collect();
    let mut vanishing = Vec::with_capacity(choices.len());
    let mut bundles = Vec::with_capacity(choices.len());
    for (i, &choice) in choices.iter().enumerate() {
        vanishing.push(u.clone());
        match choice {
            Choice::Free => {
                bundles.push(Bundle::Free);
                u.iter_mut().for_each(|x| *x += 1);
            }
            Choice::Symbol(s) => {
                let j = usize::from(s)
                    .checked_sub(1)
                    .filter(|&j| j <= rank)
                    .ok_or_else(|| {
                        ChainError::InvalidConfiguration(format!("symbol {s} out of range"))
                    })?;
                bundles.push(Bundle::Fixed(u[j]));
                for (k, x) in u.iter_mut().enumerate() {
                    if k != j {
                        *x += 1;
                    }
                }
            }
        }
        if u.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChainError::InvalidConfiguration(format!(
                "vanishing orders {u:?} after component {} are not increasing",
                i + 1
            )));
        }
    }
    let cap = |k: usize| i64::from(chain.d) - rank as i64 + k as i64;
    if let Some(k) = (0..=rank).find(|&k| i64::from(u[k]) > cap(k)) {
        return Err(ChainError::InvalidConfiguration(format!(
            "exit order u_{k}={} exceeds d-r+{k}",
            u[k]
        )));
    }
    Ok(Trajectory {
        vanishing,
        exit: u,
        bundles,
    })
}

/// Vanishing states and bundles along the chain for one component of `W^1_{a+2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub vanishing: Vec<VanishingState>,
    pub bundles: Vec<Bundle>,
}

/// Walks the chain for the component `id` starting from `(u1, u2) = (0, 1)`.
pub fn propagate(chain: &ChainSpec, id: &BNComponentId) -> Result<Propagation, ChainError> {
    let a = chain.require_rho_one()?;
    let seq = &id.sequence;
    if seq.alphabet_size() != 2 || seq.multiplicity() != a {
        return Err(ChainError::MalformedId(format!(
            "sequence {seq} is not a Dyck word with a={a}"
        )));
    }
    if id.marked == 0 || id.marked > chain.g {
        return Err(ChainError::MalformedId(format!(
            "marked index {} not in 1..={}",
            id.marked, chain.g
        )));
    }
    let mut symbols = seq.symbols().iter().copied();
    let mut choices = Vec::with_capacity(chain.g as usize);
    for i in 1..=chain.g {
        if i == id.marked {
            choices.push(Choice::Free);
        } else {
            let s = symbols.next().ok_or_else(|| {
                ChainError::MalformedId(format!("sequence exhausted at component {i}"))
            })?;
            choices.push(Choice::Symbol(s));
        }
    }
    if symbols.next().is_some() {
        return Err(ChainError::MalformedId(
            "sequence longer than the chain".into(),
        ));
    }
    let t = trajectory(chain, &choices)?;
    Ok(Propagation {
        vanishing: t
            .vanishing
            .iter()
            .map(|u| VanishingState { u1: u[0], u2: u[1] })
            .collect(),
        bundles: t.bundles,
    })
}

/// All components of `W^1_{a+2}` on the chain, in (word, marked) order.
pub fn component_ids(chain: &ChainSpec) -> Result<Vec<BNComponentId>, ChainError> {
    let a = chain.require_rho_one()?;
    Ok(enumerate_ballot(a, 2)
        .flat_map(|seq| (1..=chain.g).map(move |marked| BNComponentId::new(seq.clone(), marked)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableColumn {
    pub id: BNComponentId,
    pub bundles: Vec<Bundle>,
}

/// Bundle tuple of every component: one column per component, one row per
/// elliptic curve of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTable {
    pub g: u32,
    pub d: u32,
    pub columns: Vec<TableColumn>,
}

impl ComponentTable {
    pub fn entry(&self, column: usize, row: usize) -> String {
        self.columns[column].bundles[row].render(self.d)
    }

    pub fn column_by_id(&self, id: &BNComponentId) -> Option<&TableColumn> {
        self.columns.iter().find(|c| &c.id == id)
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("component");
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.id.label());
        }
        out.push('\n');
        for row in 0..self.g as usize {
            out.push_str(&(row + 1).to_string());
            for col in 0..self.columns.len() {
                out.push(',');
                out.push_str(&self.entry(col, row));
            }
            out.push('\n');
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.g as usize + 1);
        let mut header = vec!["C".to_string()];
        header.extend(self.columns.iter().map(|c| c.id.label()));
        cells.push(header);
        for row in 0..self.g as usize {
            let mut line = vec![(row + 1).to_string()];
            line.extend((0..self.columns.len()).map(|col| self.entry(col, row)));
            cells.push(line);
        }
        let ncols = cells[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &cells {
            let padded: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

pub fn component_tables(chain: &ChainSpec) -> Result<ComponentTable, ChainError> {
    let columns = component_ids(chain)?
        .into_iter()
        .map(|id| {
            let bundles = propagate(chain, &id)?.bundles;
            Ok(TableColumn { id, bundles })
        })
        .collect::<Result<Vec<_>, ChainError>>()?;
    Ok(ComponentTable {
        g: chain.g,
        d: chain.d,
        columns,
    })
}

/// Result of comparing the number of non-distinguished bundles with `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub epsilon_sum: u32,
    pub bound: i64,
    pub ok: bool,
}

/// `sum eps_i <= rho`, where `eps_i = 1` exactly on components whose bundle
/// is not of the form `O(u_j P + (d - u_j) Q)`.
pub fn bn_bound_check(chain: &ChainSpec, choices: &[Choice]) -> BoundCheck {
    let epsilon_sum = choices.iter().filter(|c| matches!(c, Choice::Free)).count() as u32;
    let bound = chain.rho();
    BoundCheck {
        epsilon_sum,
        bound,
        ok: i64::from(epsilon_sum) <= bound,
    }
}

/// Outcome of [`exhaustive_search`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SearchSummary {
    /// Partial configurations visited, including pruned ones.
    pub visited: u64,
    /// Complete configurations that are limit series, indexed by number of free components.
    pub valid_by_free: Vec<u64>,
    /// Limit series violating the `sum eps_i <= rho` bound. Always zero.
    pub bound_violations: u64,
    /// Limit series passing the bound check.
    pub bound_passing: u64,
}

impl SearchSummary {
    pub fn valid(&self) -> u64 {
        self.valid_by_free.iter().sum()
    }
}

/// Depth-first search over every per-component choice in `{1..r+1, free}`.
///
/// A partial configuration is abandoned as soon as its orders stop increasing
/// or exceed the cap forced by the far end of the chain; orders never decrease,
/// so no completion of an abandoned prefix can be a limit series.
pub fn exhaustive_search(chain: &ChainSpec) -> SearchSummary {
    struct Dfs<'a> {
        chain: &'a ChainSpec,
        choices: Vec<Choice>,
        summary: SearchSummary,
    }

    impl Dfs<'_> {
        fn cap(&self, k: usize) -> i64 {
            i64::from(self.chain.d) - i64::from(self.chain.r) + k as i64
        }

        fn viable(&self, u: &[u32]) -> bool {
            u.windows(2).all(|w| w[0] < w[1])
                && u.iter()
                    .enumerate()
                    .all(|(k, &x)| i64::from(x) <= self.cap(k))
        }

        fn visit(&mut self, u: &mut Vec<u32>, frees: usize) {
            self.summary.visited += 1;
            if self.choices.len() == self.chain.g as usize {
                let check = bn_bound_check(self.chain, &self.choices);
                debug_assert_eq!(check.epsilon_sum as usize, frees);
                if self.summary.valid_by_free.len() <= frees {
                    self.summary.valid_by_free.resize(frees + 1, 0);
                }
                self.summary.valid_by_free[frees] += 1;
                if check.ok {
                    self.summary.bound_passing += 1;
                } else {
                    self.summary.bound_violations += 1;
                }
                return;
            }
            let n = u.len();
            for j in 0..=n {
                // j == n encodes a free component
                for (k, x) in u.iter_mut().enumerate() {
                    if k != j {
                        *x += 1;
                    }
                }
                if self.viable(u) {
                    self.choices.push(if j == n {
                        Choice::Free
                    } else {
                        Choice::Symbol(j as u8 + 1)
                    });
                    self.visit(u, frees + usize::from(j == n));
                    self.choices.pop();
                } else {
                    self.summary.visited += 1;
                }
                for (k, x) in u.iter_mut().enumerate() {
                    if k != j {
                        *x -= 1;
                    }
                }
            }
        }
    }

    let mut dfs = Dfs {
        chain,
        choices: Vec::with_capacity(chain.g as usize),
        summary: SearchSummary::default(),
    };
    let mut u: Vec<u32> = (0..=chain.r).collect();
    if dfs.viable(&u) {
        dfs.visit(&mut u, 0);
    }
    dfs.summary
}

/// What the chain says about `W^r_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count")]
pub enum Census {
    Empty,
    /// Finitely many series (Castelnuovo count).
    Finite(#[serde(with = "crate::serde_count")] Count),
    /// A curve with this many irreducible components.
    Curve(#[serde(with = "crate::serde_count")] Count),
}

/// Census of limit series for the parameter shapes the chain model covers.
///
/// `rho < 0` gives [`Census::Empty`]; `rho = 0` with `g = a(r+1)`, `d = r(a+1)`
/// gives the generalized Catalan number; `r = 1`, `g = 2a+1`, `d = a+2` gives
/// the curve with `(2a+1) c_a` components.
pub fn limit_series_census(g: u32, r: u32, d: u32) -> Result<Census, ChainError> {
    let out = ChainError::OutOfModeledRange { g, r, d };
    if r == 0 {
        return Err(out);
    }
    let rho = rho(g.into(), r.into(), d.into());
    if rho < 0 {
        return Ok(Census::Empty);
    }
    if rho == 0 {
        let m = r + 1;
        if g > 0 && g.is_multiple_of(m) {
            let a = g / m;
            if d == r * (a + 1) {
                return Ok(Census::Finite(generalized_catalan(a, m)));
            }
        }
        return Err(out);
    }
    if rho == 1 && r == 1 {
        if let Some(a) = (ChainSpec { g, r, d }).rho_one_parameter() {
            return Ok(Census::Curve(Count::from(g) * catalan(a)));
        }
    }
    Err(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn id(seq: &[u8], marked: u32) -> BNComponentId {
        let a = seq.len() as u32 / 2;
        BNComponentId::new(BallotSequence::new(seq.to_vec(), a, 2).unwrap(), marked)
    }

    fn rendered(chain: &ChainSpec, id: &BNComponentId) -> Vec<String> {
        propagate(chain, id)
            .unwrap()
            .bundles
            .iter()
            .map(|b| b.render(chain.d))
            .collect()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(5, 1, 4), 1);
        assert_eq!(rho(4, 1, 3), 0);
        assert_eq!(rho(3, 1, 2), -1);
    }

    #[test]
    fn propagate_examples() {
        let c5 = ChainSpec::rho_one(2).unwrap();
        let p = propagate(&c5, &id(&[1, 2, 1, 2], 1)).unwrap();
        assert_eq!(
            p.bundles,
            vec![
                Bundle::Free,
                Bundle::Fixed(1),
                Bundle::Fixed(3),
                Bundle::Fixed(2),
                Bundle::Fixed(4)
            ]
        );
        assert_eq!(
            rendered(&c5, &id(&[1, 2, 1, 2], 1)),
            ["L", "P+3Q", "3P+Q", "2P+2Q", "4P"]
        );
        let p = propagate(&c5, &id(&[1, 1, 2, 2], 2)).unwrap();
        assert_eq!(
            p.bundles,
            vec![
                Bundle::Fixed(0),
                Bundle::Free,
                Bundle::Fixed(1),
                Bundle::Fixed(4),
                Bundle::Fixed(4)
            ]
        );
        let c3 = ChainSpec::rho_one(1).unwrap();
        let p = propagate(&c3, &id(&[1, 2], 3)).unwrap();
        assert_eq!(
            p.bundles,
            vec![Bundle::Fixed(0), Bundle::Fixed(2), Bundle::Free]
        );
        assert_eq!(
            p.vanishing,
            vec![
                VanishingState { u1: 0, u2: 1 },
                VanishingState { u1: 0, u2: 2 },
                VanishingState { u1: 1, u2: 2 }
            ]
        );
    }

    #[test]
    fn propagate_rejects_malformed_ids() {
        let c5 = ChainSpec::rho_one(2).unwrap();
        assert!(matches!(
            propagate(&c5, &id(&[1, 2], 1)),
            Err(ChainError::MalformedId(_))
        ));
        assert!(matches!(
            propagate(&c5, &id(&[1, 2, 1, 2], 6)),
            Err(ChainError::MalformedId(_))
        ));
        assert!(matches!(
            propagate(&c5, &id(&[1, 2, 1, 2], 0)),
            Err(ChainError::MalformedId(_))
        ));
        let odd = ChainSpec::new(5, 1, 3).unwrap();
        assert!(matches!(
            propagate(&odd, &id(&[1, 2, 1, 2], 1)),
            Err(ChainError::NotRhoOne { .. })
        ));
    }

    #[test]
    fn render_forms() {
        assert_eq!(Bundle::Fixed(0).render(4), "4Q");
        assert_eq!(Bundle::Fixed(4).render(4), "4P");
        assert_eq!(Bundle::Fixed(1).render(4), "P+3Q");
        assert_eq!(Bundle::Fixed(3).render(4), "3P+Q");
        assert_eq!(Bundle::Fixed(1).render(2), "P+Q");
        assert_eq!(Bundle::Free.render(4), "L");
        assert_eq!(Bundle::Fixed(3).q_order(4), Some(1));
        assert_eq!(Bundle::Free.q_order(4), None);
    }

    #[test]
    fn table_examples() {
        let t = component_tables(&ChainSpec::rho_one(2).unwrap()).unwrap();
        assert_eq!(t.columns.len(), 10);
        let col = |seq: &[u8], m: u32| -> Vec<String> {
            t.column_by_id(&id(seq, m))
                .unwrap()
                .bundles
                .iter()
                .map(|b| b.render(4))
                .collect()
        };
        assert_eq!(col(&[1, 2, 1, 2], 2), ["4Q", "L", "3P+Q", "2P+2Q", "4P"]);
        assert_eq!(col(&[1, 1, 2, 2], 4), ["4Q", "4Q", "3P+Q", "L", "4P"]);
        let t3 = component_tables(&ChainSpec::rho_one(1).unwrap()).unwrap();
        assert_eq!(t3.columns.len(), 3);
        assert!(t3.columns.iter().all(|c| c.id.sequence.symbols() == [1, 2]));
    }

    #[test]
    fn csv_and_text_render() {
        let t3 = component_tables(&ChainSpec::rho_one(1).unwrap()).unwrap();
        let csv = t3.render_csv();
        assert_eq!(csv.lines().next().unwrap(), "component,12|1,12|2,12|3");
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(csv.lines().nth(1).unwrap(), "1,L,3Q,3Q");
        let text = t3.render_text();
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn bound_examples() {
        let c5 = ChainSpec::rho_one(2).unwrap();
        for cid in component_ids(&c5).unwrap() {
            let check = bn_bound_check(&c5, &cid.choices());
            assert_eq!(
                check,
                BoundCheck {
                    epsilon_sum: 1,
                    bound: 1,
                    ok: true
                }
            );
        }
        let c4 = ChainSpec::new(4, 1, 3).unwrap();
        let free = [
            Choice::Free,
            Choice::Symbol(1),
            Choice::Symbol(2),
            Choice::Symbol(1),
        ];
        assert!(!bn_bound_check(&c4, &free).ok);
        assert_eq!(bn_bound_check(&c4, &free).bound, 0);
        let c3 = ChainSpec::new(3, 1, 2).unwrap();
        let s = exhaustive_search(&c3);
        assert_eq!(s.valid(), 0);
        assert_eq!(s.bound_passing, 0);
    }

    #[test]
    fn census_examples() {
        assert_eq!(
            limit_series_census(4, 1, 3),
            Ok(Census::Finite(Count::from(2u32)))
        );
        assert_eq!(
            limit_series_census(5, 1, 4),
            Ok(Census::Curve(Count::from(10u32)))
        );
        assert_eq!(
            limit_series_census(6, 2, 6),
            Ok(Census::Finite(Count::from(5u32)))
        );
        assert_eq!(limit_series_census(3, 1, 2), Ok(Census::Empty));
        assert!(matches!(
            limit_series_census(5, 1, 5),
            Err(ChainError::OutOfModeledRange { .. })
        ));
        assert!(matches!(
            limit_series_census(5, 2, 6),
            Err(ChainError::OutOfModeledRange { .. })
        ));
    }

    #[test]
    fn search_counts_match_census() {
        // rho = 0: all-fixed configurations are the finitely many series
        for (a, r) in [(1, 1), (2, 1), (3, 1), (2, 2), (1, 3), (2, 3)] {
            let chain = ChainSpec::new(a * (r + 1), r, r * (a + 1)).unwrap();
            let s = exhaustive_search(&chain);
            assert_eq!(s.valid(), s.valid_by_free[0]);
            assert_eq!(Count::from(s.valid()), generalized_catalan(a, r + 1));
        }
        // rho = 1: configurations with one free component are the curve's components
        for a in 1..=4 {
            let chain = ChainSpec::rho_one(a).unwrap();
            let s = exhaustive_search(&chain);
            assert_eq!(
                Count::from(s.valid_by_free[1]),
                Count::from(2 * a + 1) * catalan(a)
            );
            assert_eq!(s.bound_violations, 0);
        }
    }

    #[test]
    fn vanishing_counting_identity() {
        for a in 1..=5 {
            let chain = ChainSpec::rho_one(a).unwrap();
            for cid in component_ids(&chain).unwrap() {
                let p = propagate(&chain, &cid).unwrap();
                let choices = cid.choices();
                for (i, state) in p.vanishing.iter().enumerate() {
                    let not1 = choices[..i]
                        .iter()
                        .filter(|c| **c != Choice::Symbol(1))
                        .count() as u32;
                    let not2 = choices[..i]
                        .iter()
                        .filter(|c| **c != Choice::Symbol(2))
                        .count() as u32;
                    assert_eq!(state.u1, not1);
                    assert_eq!(state.u2, 1 + not2);
                    assert!(state.u1 < state.u2 && state.u2 <= chain.d);
                }
            }
        }
    }

    #[test]
    fn sequence_to_tuple_is_injective() {
        for a in 1..=5 {
            let chain = ChainSpec::rho_one(a).unwrap();
            for marked in 1..=chain.g {
                let mut seen = HashSet::new();
                for seq in enumerate_ballot(a, 2) {
                    let b = propagate(&chain, &BNComponentId::new(seq, marked))
                        .unwrap()
                        .bundles;
                    assert!(seen.insert(b), "a={a} marked={marked}");
                }
            }
        }
    }
}
