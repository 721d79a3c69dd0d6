//! Subspaces of `g`, structure series, centers and ideal checks.

use super::linalg::{independent_subset, kernel, rank};
use super::poly::Q;
use super::vector::{commutator, Basis, GVector};
use super::LieError;
use num::traits::Zero;
use serde::Serialize;
use std::fmt;

/// W-content of a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WPart {
    None,
    Full,
    Listed,
}

/// Span of independent generators, optionally plus the whole
/// infinite-dimensional part `⟨W(Ω)⟩`. When `w_full` is set the generators
/// are stored without their W-components, since those are absorbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    gens: Vec<GVector>,
    w_full: bool,
}

fn max_degree<'a>(vs: impl IntoIterator<Item = &'a GVector>) -> usize {
    vs.into_iter().map(|v| v.omega_degree()).max().unwrap_or(0)
}

fn rows(vs: &[GVector], deg: usize, finite_only: bool) -> Vec<Vec<Q>> {
    vs.iter().map(|v| if finite_only { v.fin.to_vec() } else { v.coords(deg) }).collect()
}

impl Subspace {
    /// Errors if the generators are linearly dependent.
    pub fn new(gens: Vec<GVector>, w_full: bool) -> Result<Self, LieError> {
        let s = Self::span(gens.clone(), w_full);
        if s.gens.len() != gens.len() || gens.iter().any(|g| g.is_zero()) {
            return Err(LieError::DependentGenerators);
        }
        Ok(s)
    }

    /// Span of arbitrary vectors, keeping an independent subset.
    pub fn span(gens: Vec<GVector>, w_full: bool) -> Self {
        let gens: Vec<GVector> = if w_full { gens.iter().map(|g| g.finite_part()).collect() } else { gens };
        let deg = max_degree(&gens);
        let keep = independent_subset(&rows(&gens, deg, w_full));
        Self { gens: keep.into_iter().map(|i| gens[i].clone()).collect(), w_full }
    }

    pub fn zero() -> Self {
        Self { gens: vec![], w_full: false }
    }

    pub fn basis_span(bs: &[Basis], w_full: bool) -> Self {
        Self::span(bs.iter().map(|&b| GVector::basis(b)).collect(), w_full)
    }

    pub fn gens(&self) -> &[GVector] {
        &self.gens
    }

    pub fn w_full(&self) -> bool {
        self.w_full
    }

    pub fn w_part(&self) -> WPart {
        if self.w_full {
            WPart::Full
        } else if self.gens.iter().any(|g| !g.omega.is_zero()) {
            WPart::Listed
        } else {
            WPart::None
        }
    }

    fn has_w(&self) -> bool {
        self.w_part() != WPart::None
    }

    /// Number of listed generators (the finite dimension when `w_full` is unset).
    pub fn listed_dim(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() && !self.w_full
    }

    pub fn contains(&self, v: &GVector) -> bool {
        let deg = max_degree(self.gens.iter().chain(std::iter::once(v)));
        let mut m = rows(&self.gens, deg, self.w_full);
        let base = m.len();
        m.push(if self.w_full { v.fin.to_vec() } else { v.coords(deg) });
        rank(&m) == base
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Subspace) -> bool {
        (self.w_full || !other.w_full) && other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.includes(other) && other.includes(self)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Self::span(g, self.w_full || other.w_full)
    }

    /// Finite-dimensional part `⟨D, G, Pt, Px, Pv⟩ ∩ self`, valid when every
    /// generator is either finite or when the W part is full.
    pub fn finite_part(&self) -> Subspace {
        Self::span(self.gens.iter().filter(|g| g.omega.is_zero()).cloned().collect(), false)
    }

    /// `[a, b]` as a subspace.
    pub fn bracket_span(a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = vec![];
        for x in &a.gens {
            for y in &b.gens {
                out.push(commutator(x, y));
            }
        }
        let w_full = (a.w_full && b.has_w()) || (b.w_full && a.has_w());
        Self::span(out, w_full)
    }

    pub fn is_subalgebra(&self) -> bool {
        self.includes(&Self::bracket_span(self, self))
    }

    pub fn is_ideal_of(&self, g: &Subspace) -> bool {
        g.includes(self) && self.includes(&Self::bracket_span(self, g))
    }

    /// Smallest ideal of `g` containing `self`.
    pub fn ideal_closure(&self, g: &Subspace) -> Subspace {
        let mut s = self.clone();
        loop {
            let next = s.sum(&Self::bracket_span(&s, g));
            if next.same_as(&s) {
                return s;
            }
            s = next;
        }
    }

    fn series(&self, step: impl Fn(&Subspace) -> Subspace) -> Result<Vec<Subspace>, LieError> {
        if !self.is_subalgebra() {
            return Err(LieError::NotSubalgebra(self.to_string()));
        }
        let mut out = vec![self.clone()];
        loop {
            let next = step(out.last().unwrap());
            if next.same_as(out.last().unwrap()) {
                return Ok(out);
            }
            out.push(next);
        }
    }

    /// `[s, s′, s″, …]` up to the first repeated term.
    pub fn derived_series(&self) -> Result<Vec<Subspace>, LieError> {
        self.series(|s| Self::bracket_span(s, s))
    }

    /// `[s, [s,s], [s,[s,s]], …]` up to the first repeated term.
    pub fn lower_central_series(&self) -> Result<Vec<Subspace>, LieError> {
        let s0 = self.clone();
        self.series(move |s| Self::bracket_span(&s0, s))
    }

    pub fn is_solvable(&self) -> Result<bool, LieError> {
        Ok(self.derived_series()?.last().unwrap().is_zero())
    }

    pub fn is_nilpotent(&self) -> Result<bool, LieError> {
        Ok(self.lower_central_series()?.last().unwrap().is_zero())
    }

    /// Elements of `self` commuting with all of `self`.
    pub fn center(&self) -> Result<Subspace, LieError> {
        if !self.is_subalgebra() {
            return Err(LieError::NotSubalgebra(self.to_string()));
        }
        // Only W(0) commutes with every W(Ω), so a full W part contributes nothing.
        let n = self.gens.len();
        let brackets: Vec<Vec<GVector>> = self.gens.iter().map(|gi| self.gens.iter().map(|gj| commutator(gi, gj)).collect()).collect();
        let deg = max_degree(brackets.iter().flatten());
        let mut a: Vec<Vec<Q>> = vec![];
        for j in 0..n {
            let cols: Vec<Vec<Q>> = (0..n).map(|i| brackets[i][j].coords(deg)).collect();
            for r in 0..cols.first().map_or(0, |c| c.len()) {
                a.push((0..n).map(|i| cols[i][r].clone()).collect());
            }
        }
        let ker = kernel(&a, n);
        Ok(Self::span(ker.iter().map(|c| combine(&self.gens, c)).collect(), false))
    }
}

fn combine(gens: &[GVector], c: &[Q]) -> GVector {
    gens.iter().zip(c).fold(GVector::zero(), |acc, (g, ci)| acc.add(&g.scale(ci)))
}

/// `{z ∈ i0 : [z, i1] ⊆ i2}`.
pub fn megaideal_closure(i0: &Subspace, i1: &Subspace, i2: &Subspace) -> Result<Subspace, LieError> {
    if i0.w_full && !i2.w_full && i1.w_part() == WPart::Listed {
        return Err(LieError::Unsupported("free W part of i0 against listed W generators of i1 with finite i2".into()));
    }
    let n = i0.gens.len();
    let m = i2.gens.len();
    let finite_only = i2.w_full;
    let ys = &i1.gens;
    let brackets: Vec<Vec<GVector>> = ys.iter().map(|y| i0.gens.iter().map(|g| commutator(g, y)).collect()).collect();
    let deg = max_degree(brackets.iter().flatten().chain(i2.gens.iter()).chain(i0.gens.iter()));
    let width = if finite_only { 5 } else { 6 + deg };
    let coords = |v: &GVector| if finite_only { v.fin.to_vec() } else { v.coords(deg) };
    // Unknowns: c (n entries), then one block d_y (m entries) per y.
    let total = n + m * ys.len();
    let mut a: Vec<Vec<Q>> = vec![];
    for (yi, by) in brackets.iter().enumerate() {
        let bc: Vec<Vec<Q>> = by.iter().map(coords).collect();
        let hc: Vec<Vec<Q>> = i2.gens.iter().map(coords).collect();
        for r in 0..width {
            let mut row = vec![Q::zero(); total];
            for i in 0..n {
                row[i] = bc[i][r].clone();
            }
            for k in 0..m {
                row[n + yi * m + k] = -hc[k][r].clone();
            }
            a.push(row);
        }
    }
    if i1.w_full && !i2.w_full {
        for k in 0..=deg {
            let mut row = vec![Q::zero(); total];
            for i in 0..n {
                row[i] = i0.gens[i].omega.coeff(k);
            }
            a.push(row);
        }
    }
    let ker = kernel(&a, total);
    let zs: Vec<GVector> = ker.iter().map(|c| combine(&i0.gens, &c[..n])).collect();
    let w_full = i0.w_full && (i2.w_full || !i1.has_w());
    Ok(Subspace::span(zs, w_full))
}

/// Standard subspaces of `g` in the basis `(D, G, Pt, Px, Pv) ⊕ ⟨W(Ω)⟩`.
pub mod standard {
    use super::*;
    use Basis::*;

    pub fn g() -> Subspace {
        Subspace::basis_span(&Basis::ALL, true)
    }
    pub fn radical() -> Subspace {
        Subspace::basis_span(&Basis::ALL, false)
    }
    pub fn nilradical() -> Subspace {
        Subspace::basis_span(&[G, Pt, Px, Pv], false)
    }
    pub fn g_prime() -> Subspace {
        Subspace::basis_span(&[Pt, Px], true)
    }
    pub fn w_ideal() -> Subspace {
        Subspace::basis_span(&[], true)
    }
    pub fn center_g() -> Subspace {
        Subspace::basis_span(&[Pv], false)
    }
    pub fn r_prime() -> Subspace {
        Subspace::basis_span(&[Pt, Px], false)
    }
    pub fn n_prime() -> Subspace {
        Subspace::basis_span(&[Px], false)
    }
    pub fn m1() -> Subspace {
        Subspace::basis_span(&[G, Px, Pv], false)
    }
    pub fn m2() -> Subspace {
        Subspace::basis_span(&[D, Pt, Px, Pv], false)
    }

    /// The six megaideals used for the point symmetry group computation.
    pub fn megaideal_list() -> Vec<(&'static str, Subspace)> {
        vec![("r", radical()), ("m1", m1()), ("r'", r_prime()), ("n'", n_prime()), ("Z(g)", center_g()), ("g''", w_ideal())]
    }
}

fn maximal_among_extensions(s: &Subspace, g: &Subspace, good: impl Fn(&Subspace) -> Result<bool, LieError>) -> bool {
    let mut candidates: Vec<Subspace> = Basis::ALL
        .iter()
        .map(|&b| GVector::basis(b))
        .filter(|e| !s.contains(e))
        .map(|e| {
            let mut gg = s.gens.clone();
            gg.push(e);
            Subspace::span(gg, s.w_full)
        })
        .collect();
    if !s.w_full {
        candidates.push(Subspace::span(s.gens.clone(), true));
    }
    candidates.iter().all(|c| {
        let c = c.ideal_closure(g);
        !matches!(good(&c), Ok(true))
    })
}

/// `s` is a solvable ideal of `g`, and adding any missing basis element or
/// the W part destroys solvability.
pub fn radical_check(s: &Subspace) -> bool {
    let g = standard::g();
    s.is_ideal_of(&g) && matches!(s.is_solvable(), Ok(true)) && maximal_among_extensions(s, &g, |c| c.is_solvable())
}

/// `s` is a nilpotent ideal of `g`, maximal in the same sense as [`radical_check`].
pub fn nilradical_check(s: &Subspace) -> bool {
    let g = standard::g();
    s.is_ideal_of(&g) && matches!(s.is_nilpotent(), Ok(true)) && maximal_among_extensions(s, &g, |c| c.is_nilpotent())
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        match (names.is_empty(), self.w_full) {
            (true, false) => write!(f, "0"),
            (true, true) => write!(f, "<W(Ω)>"),
            (false, false) => write!(f, "<{}>", names.join(", ")),
            (false, true) => write!(f, "<{}> + <W(Ω)>", names.join(", ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use crate::lie_algebra::poly::{q, QPoly};

    #[test]
    fn derived_series_of_g_and_radical() {
        let s = g().derived_series().unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[1].same_as(&g_prime()));
        assert!(s[2].same_as(&w_ideal()));
        let r = radical().derived_series().unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[1].same_as(&r_prime()));
        assert!(r[2].is_zero());
        let ab = r_prime().derived_series().unwrap();
        assert_eq!(ab.len(), 2);
        assert!(ab[1].is_zero());
    }

    #[test]
    fn centers() {
        assert!(g().center().unwrap().same_as(&center_g()));
        assert!(r_prime().center().unwrap().same_as(&r_prime()));
        // [Px, D] = Px, so only Pv survives.
        assert!(radical().center().unwrap().same_as(&center_g()));
    }

    #[test]
    fn radical_and_nilradical() {
        assert!(radical_check(&radical()));
        assert!(nilradical_check(&nilradical()));
        assert!(!nilradical_check(&Subspace::basis_span(&[Basis::D], false)));
        assert!(!radical_check(&nilradical()));
        let lcs = nilradical().lower_central_series().unwrap();
        assert!(lcs[1].same_as(&n_prime()));
        assert!(lcs[2].is_zero());
    }

    #[test]
    fn megaideal_closure_examples() {
        let m = megaideal_closure(&radical(), &radical(), &n_prime()).unwrap();
        assert!(m.same_as(&m1()));
        let gg = megaideal_closure(&g(), &g(), &g()).unwrap();
        assert!(gg.same_as(&g()));
        let z = megaideal_closure(&radical(), &g(), &Subspace::zero()).unwrap();
        assert!(z.same_as(&center_g()));
    }

    #[test]
    fn bracket_with_listed_w() {
        let a = Subspace::span(vec![GVector::w(QPoly::from_ints(&[1]))], false);
        assert!(Subspace::bracket_span(&a, &w_ideal()).same_as(&w_ideal()));
        assert!(Subspace::bracket_span(&a, &radical()).is_zero());
    }

    #[test]
    fn dependent_generators_rejected() {
        let v = GVector::basis(Basis::D);
        assert!(Subspace::new(vec![v.clone(), v.scale(&q(2))], false).is_err());
    }
}
