//! Lower and upper central series, coordinate weights and terraced filtrations.
//!
//! Every subgroup handled here is a *coordinate subgroup*: the set of elements
//! supported on a fixed set of live coordinates. For catalog groups the central
//! series are of this form, and each computed term is checked to be a normal
//! coordinate subgroup before it is accepted.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Group};

pub type CoordSet = BTreeSet<usize>;

/// Central series data cached on each `Group`.
#[derive(Debug, Clone)]
pub struct Series {
    /// `γ_1 ⊋ … ⊋ γ_c`, the trivial term omitted.
    lower: Vec<CoordSet>,
    /// `ζ_0 = 1 ⊊ … ⊊ ζ_c = G`.
    upper: Vec<CoordSet>,
    weights: Vec<usize>,
}

impl Series {
    pub fn class(&self) -> usize {
        self.lower.len()
    }

    /// `γ_k` for `k ≥ 1`; empty beyond the class.
    pub fn gamma(&self, k: usize) -> CoordSet {
        assert!(k >= 1, "the lower central series starts at γ_1");
        self.lower.get(k - 1).cloned().unwrap_or_default()
    }

    /// `ζ_k` for `k ≥ 0`; everything beyond the class.
    pub fn zeta(&self, k: usize) -> CoordSet {
        self.upper
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.upper.last().cloned().unwrap_or_default())
    }

    /// The `k` with `e_c ∈ γ_k \ γ_{k+1}`.
    pub fn weight(&self, coord: usize) -> usize {
        self.weights[coord]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Smallest `k` with `e_c ∈ ζ_k`.
    pub fn zeta_level(&self, coord: usize) -> usize {
        self.upper
            .iter()
            .position(|z| z.contains(&coord))
            .expect("ζ_c contains every coordinate")
    }

    pub fn bass_degree(&self) -> usize {
        self.weights.iter().sum()
    }
}

impl Group {
    /// Central series, computed once and memoised.
    pub fn series(&self) -> Result<&Series> {
        self.series_cell()
            .get_or_init(|| compute_series(self))
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn basis_support(e: &Element) -> CoordSet {
    e.support().into_iter().collect()
}

/// Live `(i,j)` outside `set` that receives a product term from two coordinates in `set`.
fn closure_violation(group: &Group, set: &CoordSet) -> Option<(usize, usize, usize)> {
    let layout = group.layout();
    for t in 0..group.dim() {
        if set.contains(&t) {
            continue;
        }
        for &(a, b) in layout.terms(t) {
            if set.contains(&(a as usize)) && set.contains(&(b as usize)) {
                return Some((t, a as usize, b as usize));
            }
        }
    }
    None
}

/// A basis element of `set` and a generator whose conjugate leaves `set`.
fn normality_violation(group: &Group, set: &CoordSet) -> Option<(usize, Element)> {
    let gens = group.default_gens().symmetric();
    for &c in set {
        let e = group.basis(c);
        for v in &gens {
            let conj = e.conjugate_by(v).expect("same group");
            if !basis_support(&conj).is_subset(set) {
                return Some((c, v.clone()));
            }
        }
    }
    None
}

/// Smallest product-closed, generator-conjugation-closed coordinate set containing `seed`.
pub fn normal_closure(group: &Group, seed: &CoordSet) -> CoordSet {
    let gens = group.default_gens().symmetric();
    let layout = group.layout();
    let mut set = seed.clone();
    loop {
        let mut next = set.clone();
        for t in 0..group.dim() {
            if layout
                .terms(t)
                .iter()
                .any(|&(a, b)| set.contains(&(a as usize)) && set.contains(&(b as usize)))
            {
                next.insert(t);
            }
        }
        for &c in &set {
            let e = group.basis(c);
            for v in &gens {
                next.extend(basis_support(&e.conjugate_by(v).expect("same group")));
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

fn guard(group: &Group, set: &CoordSet, what: &str) -> Result<()> {
    if closure_violation(group, set).is_some() || normality_violation(group, set).is_some() {
        return Err(Error::Internal(format!(
            "{what} of {group} is not a normal coordinate subgroup"
        )));
    }
    Ok(())
}

fn compute_series(group: &Group) -> Result<Series> {
    let dim = group.dim();
    let gens = group.default_gens().symmetric();

    let mut lower: Vec<CoordSet> = vec![(0..dim).collect()];
    loop {
        let cur = lower.last().unwrap();
        let mut seed = CoordSet::new();
        for &c in cur {
            let e = group.basis(c);
            for v in &gens {
                seed.extend(basis_support(&e.commutator(v)?));
            }
        }
        let next = normal_closure(group, &seed);
        if next.is_empty() {
            break;
        }
        if next == *cur || !next.is_subset(cur) || lower.len() > dim {
            return Err(Error::Internal(format!(
                "lower central series of {group} does not descend"
            )));
        }
        guard(group, &next, &format!("γ_{}", lower.len() + 1))?;
        lower.push(next);
    }

    let mut upper: Vec<CoordSet> = vec![CoordSet::new()];
    while upper.last().unwrap().len() < dim {
        let prev = upper.last().unwrap().clone();
        let mut next = prev.clone();
        for c in (0..dim).filter(|c| !prev.contains(c)) {
            let e = group.basis(c);
            let mut central = true;
            for v in &gens {
                if !basis_support(&e.commutator(v)?).is_subset(&prev) {
                    central = false;
                    break;
                }
            }
            if central {
                next.insert(c);
            }
        }
        if next == prev || upper.len() > dim {
            return Err(Error::Internal(format!(
                "upper central series of {group} stalls at ζ_{}",
                upper.len() - 1
            )));
        }
        guard(group, &next, &format!("ζ_{}", upper.len()))?;
        upper.push(next);
    }

    if upper.len() != lower.len() + 1 {
        return Err(Error::Internal(format!(
            "lower series gives class {}, upper series gives {}",
            lower.len(),
            upper.len() - 1
        )));
    }

    let weights = (0..dim)
        .map(|c| lower.iter().rposition(|g| g.contains(&c)).unwrap() + 1)
        .collect();
    Ok(Series {
        lower,
        upper,
        weights,
    })
}

/// The subgroup of elements supported on a set of live coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct CoordinateSubgroup {
    group: Group,
    coords: CoordSet,
    normal: bool,
}

impl fmt::Debug for CoordinateSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CoordinateSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<String> = self.coords.iter().map(|&c| self.group.coord_name(c)).collect();
        write!(f, "<{}>", names.join(", "))
    }
}

impl CoordinateSubgroup {
    /// Rejects coordinate sets that are not closed under multiplication.
    pub fn new(group: &Group, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let coords: CoordSet = coords.into_iter().collect();
        if let Some(&bad) = coords.iter().find(|&&c| c >= group.dim()) {
            return Err(Error::Invalid(format!("coordinate index {bad} out of range")));
        }
        let label = |set: &CoordSet| {
            let names: Vec<String> = set.iter().map(|&c| group.coord_name(c)).collect();
            format!("{{{}}}", names.join(","))
        };
        if let Some((t, a, b)) = closure_violation(group, &coords) {
            return Err(Error::NotSubgroup(
                label(&coords),
                format!(
                    "{} * {} contributes to {}",
                    group.coord_name(a),
                    group.coord_name(b),
                    group.coord_name(t)
                ),
            ));
        }
        let normal = normality_violation(group, &coords).is_none();
        Ok(CoordinateSubgroup {
            group: group.clone(),
            coords,
            normal,
        })
    }

    /// Entries `(i,j)` of one factor.
    pub fn from_entries(group: &Group, factor: usize, entries: &[(usize, usize)]) -> Result<Self> {
        let idx = entries
            .iter()
            .map(|&pos| {
                group.coord_index(factor, pos).ok_or_else(|| {
                    Error::Invalid(format!("({},{}) is not a live coordinate", pos.0, pos.1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CoordinateSubgroup::new(group, idx)
    }

    pub fn trivial(group: &Group) -> Self {
        CoordinateSubgroup {
            group: group.clone(),
            coords: CoordSet::new(),
            normal: true,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn coords(&self) -> &CoordSet {
        &self.coords
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        g.group() == &self.group && g.support().iter().all(|c| self.coords.contains(c))
    }

    pub fn is_subgroup_of(&self, other: &CoordinateSubgroup) -> bool {
        self.coords.is_subset(&other.coords)
    }
}

fn wrap(group: &Group, set: CoordSet) -> CoordinateSubgroup {
    CoordinateSubgroup {
        group: group.clone(),
        coords: set,
        normal: true,
    }
}

/// `[γ_1, …, γ_{c+1}]`, ending with the trivial subgroup.
pub fn lower_central_series(group: &Group) -> Result<Vec<CoordinateSubgroup>> {
    let s = group.series()?;
    Ok((1..=s.class() + 1).map(|k| wrap(group, s.gamma(k))).collect())
}

/// `[ζ_0, …, ζ_c]`.
pub fn upper_central_series(group: &Group) -> Result<Vec<CoordinateSubgroup>> {
    let s = group.series()?;
    Ok((0..=s.class()).map(|k| wrap(group, s.zeta(k))).collect())
}

pub fn center(group: &Group) -> Result<CoordinateSubgroup> {
    Ok(wrap(group, group.series()?.zeta(1)))
}

pub fn nilpotency_class(group: &Group) -> Result<usize> {
    Ok(group.series()?.class())
}

pub fn coordinate_weight(group: &Group, coord: usize) -> Result<usize> {
    Ok(group.series()?.weight(coord))
}

/// `ν(g)`: the largest `k` with `<g> ∩ γ_k ≠ 1`, read off as the smallest
/// weight among the nonzero coordinates of `g`.
pub fn element_weight(g: &Element) -> Result<usize> {
    let s = g.group().series()?;
    g.support()
        .into_iter()
        .map(|c| s.weight(c))
        .min()
        .ok_or_else(|| Error::Invalid("the identity has no weight".into()))
}

/// `Σ_k k · dim(γ_k / γ_{k+1})`, the degree of polynomial word growth.
pub fn bass_degree(group: &Group) -> Result<usize> {
    Ok(group.series()?.bass_degree())
}

/// `c · dim(G) − Σ_{i=1}^{c−1} dim(H_i)`.
pub fn terraced_bound(class: usize, dim_g: usize, dims: &[usize]) -> Result<usize> {
    if class == 0 {
        return Err(Error::Invalid("class must be at least 1".into()));
    }
    if dims.len() != class - 1 {
        return Err(Error::Invalid(format!(
            "expected {} subgroup dimensions for class {class}, got {}",
            class - 1,
            dims.len()
        )));
    }
    if dims.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid("subgroup dimensions must be nondecreasing".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > dim_g) {
        return Err(Error::Invalid(format!(
            "subgroup dimension {d} exceeds dim(G) = {dim_g}"
        )));
    }
    Ok(class * dim_g - dims.iter().sum::<usize>())
}

/// A validated chain `1 = H_0 ≤ H_1 ≤ … ≤ H_{c−1}` of normal subgroups with
/// `H_i ∩ γ_{i+1} = 1`.
#[derive(Debug, Clone)]
pub struct TerracedFiltration {
    terms: Vec<CoordinateSubgroup>,
    /// For each `H_i`, a coordinate whose normal closure together with `H_i`
    /// still avoids `γ_{i+1}`; `None` when no single-coordinate enlargement exists.
    enlargements: Vec<Option<usize>>,
}

impl TerracedFiltration {
    pub fn terms(&self) -> &[CoordinateSubgroup] {
        &self.terms
    }

    /// Maximal with respect to single-coordinate enlargements.
    pub fn is_maximal(&self) -> bool {
        self.enlargements.iter().all(Option::is_none)
    }

    pub fn enlargements(&self) -> &[Option<usize>] {
        &self.enlargements
    }

    pub fn require_maximal(self) -> Result<Self> {
        match self.enlargements.iter().position(Option::is_some) {
            None => Ok(self),
            Some(i) => {
                let group = self.terms[i].group();
                Err(Error::Terraced {
                    index: i,
                    condition: format!(
                        "not maximal: adding {} keeps the intersection with γ_{} trivial",
                        group.coord_name(self.enlargements[i].unwrap()),
                        i + 1
                    ),
                })
            }
        }
    }

    /// `dim(H_1), …, dim(H_{c−1})`.
    pub fn dims(&self) -> Vec<usize> {
        self.terms[1..].iter().map(CoordinateSubgroup::dim).collect()
    }

    pub fn bound(&self) -> Result<usize> {
        let group = self.terms[0].group();
        terraced_bound(nilpotency_class(group)?, group.dim(), &self.dims())
    }
}

/// Accepts `[H_0, …, H_{c−1}]` or `[H_1, …, H_{c−1}]` (then `H_0 = 1` is implied).
pub fn validate_terraced(
    group: &Group,
    candidate: &[CoordinateSubgroup],
) -> Result<TerracedFiltration> {
    let s = group.series()?;
    let c = s.class();
    let mut terms: Vec<CoordinateSubgroup> = match candidate.len() {
        n if n == c => candidate.to_vec(),
        n if n + 1 == c => {
            let mut v = vec![CoordinateSubgroup::trivial(group)];
            v.extend_from_slice(candidate);
            v
        }
        n => {
            return Err(Error::Invalid(format!(
                "a terraced filtration of a class-{c} group has {c} terms, got {n}"
            )))
        }
    };
    for (i, h) in terms.iter_mut().enumerate() {
        let fail = |condition: String| Error::Terraced { index: i, condition };
        if h.group() != group {
            return Err(Error::MixedGroups);
        }
        if i == 0 && !h.is_trivial() {
            return Err(fail("H_0 must be trivial".into()));
        }
        if !h.is_normal() {
            return Err(fail(format!("{h} is not normal")));
        }
        let gamma = s.gamma(i + 1);
        if let Some(&bad) = h.coords().intersection(&gamma).next() {
            return Err(fail(format!(
                "{h} meets γ_{} in {}",
                i + 1,
                group.coord_name(bad)
            )));
        }
    }
    for i in 1..terms.len() {
        if !terms[i - 1].is_subgroup_of(&terms[i]) {
            return Err(Error::Terraced {
                index: i,
                condition: format!("H_{} is not contained in H_{i}", i - 1),
            });
        }
    }
    let enlargements = terms
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let gamma = s.gamma(i + 1);
            (0..group.dim())
                .filter(|c| !h.coords().contains(c))
                .find(|&c| {
                    let mut seed = h.coords().clone();
                    seed.insert(c);
                    normal_closure(group, &seed).is_disjoint(&gamma)
                })
        })
        .collect();
    Ok(TerracedFiltration {
        terms,
        enlargements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::GroupSpec;

    fn g(spec: &str) -> Group {
        Group::parse(spec).unwrap()
    }

    fn entries(group: &Group, set: &CoordSet) -> Vec<(usize, usize)> {
        set.iter().map(|&c| group.coords()[c].pos).collect()
    }

    #[test]
    fn heisenberg_series() {
        let h = g("heisenberg");
        let s = h.series().unwrap();
        assert_eq!(s.class(), 2);
        assert_eq!(entries(&h, &s.gamma(2)), vec![(1, 3)]);
        assert!(s.gamma(3).is_empty());
        assert_eq!(entries(&h, &center(&h).unwrap().coords().clone()), vec![(1, 3)]);
    }

    #[test]
    fn unipotent_lower_series_is_span_filtration() {
        // fixpoint oracle: γ_k(U_n) = {(i,j) : j − i ≥ k}
        for n in 2..=6 {
            let u = Group::new(&GroupSpec::Unipotent(n)).unwrap();
            let s = u.series().unwrap();
            assert_eq!(s.class(), n - 1);
            for k in 1..n {
                let want: CoordSet = (0..u.dim()).filter(|&c| u.coords()[c].span() >= k).collect();
                assert_eq!(s.gamma(k), want, "U_{n} γ_{k}");
            }
        }
    }

    #[test]
    fn gamma_group_series() {
        let gm = Group::new(&GroupSpec::gamma()).unwrap();
        let s = gm.series().unwrap();
        assert_eq!(s.class(), 3);
        let dims: Vec<usize> = (1..=3).map(|k| s.gamma(k).len()).collect();
        assert_eq!(dims, vec![8, 4, 1]);
        assert_eq!(entries(&gm, &s.zeta(1)), vec![(1, 3), (2, 5)]);
        assert_eq!(s.zeta(2).len(), 5);
        let w = |i, j| s.weight(gm.coord_index(0, (i, j)).unwrap());
        assert_eq!((w(1, 2), w(1, 3), w(2, 5)), (1, 2, 3));
        assert_eq!(s.bass_degree(), 13);
    }

    #[test]
    fn abelian_center_is_everything() {
        let z3 = g("z^3");
        assert_eq!(center(&z3).unwrap().dim(), 3);
        assert_eq!(nilpotency_class(&z3).unwrap(), 1);
        assert_eq!(bass_degree(&z3).unwrap(), 3);
    }

    #[test]
    fn bass_degrees() {
        assert_eq!(bass_degree(&g("heisenberg")).unwrap(), 4);
        assert_eq!(bass_degree(&g("gamma")).unwrap(), 13);
        assert_eq!(bass_degree(&g("heisenberg * z")).unwrap(), 5);
    }

    #[test]
    fn element_weights() {
        let h = g("heisenberg");
        assert_eq!(element_weight(&h.basis(2)).unwrap(), 2);
        assert_eq!(element_weight(&h.basis(0)).unwrap(), 1);
        assert!(element_weight(&h.identity()).is_err());
        let gm = g("gamma");
        let e25 = gm.basis(gm.coord_index(0, (2, 5)).unwrap());
        assert_eq!(element_weight(&e25).unwrap(), 3);
    }

    #[test]
    fn coordinate_subgroup_closure() {
        let u4 = g("unipotent(4)");
        assert!(CoordinateSubgroup::from_entries(&u4, 0, &[(1, 2), (2, 3)]).is_err());
        let ok = CoordinateSubgroup::from_entries(&u4, 0, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(!ok.is_normal());
        assert!(CoordinateSubgroup::from_entries(&u4, 0, &[(1, 3), (1, 4), (2, 4)])
            .unwrap()
            .is_normal());
    }

    #[test]
    fn terraced_validation() {
        let gm = g("gamma");
        let h2 = CoordinateSubgroup::from_entries(&gm, 0, &[(1, 2), (1, 3)]).unwrap();
        let t = CoordinateSubgroup::trivial(&gm);
        let f = validate_terraced(&gm, &[t.clone(), t.clone(), h2.clone()]).unwrap();
        assert!(f.is_maximal());
        assert_eq!(f.dims(), vec![0, 2]);
        assert_eq!(f.bound().unwrap(), 22);
        // the short form without H_0
        assert_eq!(validate_terraced(&gm, &[t.clone(), h2]).unwrap().bound().unwrap(), 22);

        // all-trivial chains pass, but for Γ the enlargement by e12 is reported
        let f = validate_terraced(&gm, &[t.clone(), t.clone(), t.clone()]).unwrap();
        assert!(!f.is_maximal());
        assert_eq!(f.enlargements()[2], gm.coord_index(0, (1, 2)));
        assert!(f.require_maximal().is_err());

        let h = g("heisenberg");
        let x = CoordinateSubgroup::from_entries(&h, 0, &[(1, 2)]).unwrap();
        match validate_terraced(&h, &[x]) {
            Err(Error::Terraced { index: 1, condition }) => assert!(condition.contains("not normal")),
            other => panic!("{other:?}"),
        }
        let f = validate_terraced(&h, &[CoordinateSubgroup::trivial(&h)]).unwrap();
        assert!(f.is_maximal());

        // a subgroup meeting γ_{i+1}
        let z = CoordinateSubgroup::from_entries(&h, 0, &[(1, 3)]).unwrap();
        assert!(matches!(
            validate_terraced(&h, &[z]),
            Err(Error::Terraced { index: 1, .. })
        ));
    }

    #[test]
    fn heisenberg_times_z_terraced() {
        let p = g("heisenberg * z");
        let t = CoordinateSubgroup::trivial(&p);
        let zfac = CoordinateSubgroup::new(&p, [p.coord_index(1, (1, 2)).unwrap()]).unwrap();
        let f = validate_terraced(&p, &[t.clone(), zfac]).unwrap();
        assert!(f.is_maximal());
        assert_eq!(f.bound().unwrap(), 7);
        assert!(!validate_terraced(&p, &[t.clone(), t]).unwrap().is_maximal());
    }

    #[test]
    fn terraced_bound_formula() {
        assert_eq!(terraced_bound(3, 8, &[0, 2]).unwrap(), 22);
        assert_eq!(terraced_bound(2, 3, &[0]).unwrap(), 6);
        assert_eq!(terraced_bound(4, 18, &[0, 0, 3]).unwrap(), 69);
        assert_eq!(terraced_bound(4, 18, &[0, 0, 6]).unwrap(), 66);
        assert_eq!(terraced_bound(1, 5, &[]).unwrap(), 5);
        assert!(terraced_bound(3, 8, &[2]).is_err());
        assert!(terraced_bound(3, 8, &[2, 0]).is_err());
        assert!(terraced_bound(2, 3, &[4]).is_err());
        assert!(terraced_bound(0, 3, &[]).is_err());
    }
}
