//! Catalog groups, their coordinate systems and exact element arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{Layout, Scalar};
use crate::error::{Error, Result};
use crate::series::Series;
use crate::spec::{GroupSpec, MAX_UNIPOTENT};

/// A strictly upper-triangular matrix entry of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coordinate {
    pub factor: usize,
    pub pos: (usize, usize),
    pub live: bool,
}

impl Coordinate {
    pub fn span(&self) -> usize {
        self.pos.1 - self.pos.0
    }

    /// Interval containment `(i,j) ⊇ (k,l)` within the same factor.
    pub fn contains(&self, other: &Coordinate) -> bool {
        self.factor == other.factor && self.pos.0 <= other.pos.0 && other.pos.1 <= self.pos.1
    }
}

/// One unipotent factor. Free abelian factors are stored as copies of `U_2`.
#[derive(Debug, Clone)]
pub struct Block {
    pub size: usize,
    pub offset: usize,
    pub len: usize,
    erased: BTreeSet<(usize, usize)>,
    index: Vec<Option<usize>>,
    heisenberg: bool,
}

impl Block {
    /// Global index of the live entry `(i,j)` (1-based), if any.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        if i == 0 || j > self.size || i >= j {
            return None;
        }
        self.index[(i - 1) * self.size + (j - 1)]
    }

    pub fn is_erased(&self, i: usize, j: usize) -> bool {
        self.erased.contains(&(i, j))
    }
}

struct GroupInner {
    spec: GroupSpec,
    blocks: Vec<Block>,
    coords: Vec<Coordinate>,
    block_of: Vec<usize>,
    layout: Layout,
    default_gens: Vec<(String, Vec<BigInt>)>,
    series: OnceLock<Result<Series>>,
}

/// A catalog-defined nilpotent group. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Group(Arc<GroupInner>);

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.0.spec)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Group {}

/// Validates `spec` and builds its coordinate system and default generators.
pub fn make_group(spec: &GroupSpec) -> Result<Group> {
    Group::new(spec)
}

fn check_upward_closed(size: usize, erased: &BTreeSet<(usize, usize)>) -> Result<()> {
    for &(k, l) in erased {
        if k == 0 || l > size || k >= l {
            return Err(Error::InvalidGroup(format!(
                "({k},{l}) is not a strictly upper entry of a {size}x{size} matrix"
            )));
        }
    }
    for &(k, l) in erased {
        for i in 1..=k {
            for j in l..=size {
                if !erased.contains(&(i, j)) {
                    return Err(Error::NotUpwardClosed(k, l, i, j));
                }
            }
        }
    }
    Ok(())
}

fn flatten(spec: &GroupSpec, out: &mut Vec<(usize, BTreeSet<(usize, usize)>)>) -> Result<()> {
    match spec {
        GroupSpec::FreeAbelian(k) => {
            if *k == 0 {
                return Err(Error::InvalidGroup("free abelian rank must be at least 1".into()));
            }
            for _ in 0..*k {
                out.push((2, BTreeSet::new()));
            }
        }
        GroupSpec::Unipotent(n) => {
            if !(2..=MAX_UNIPOTENT).contains(n) {
                return Err(Error::InvalidGroup(format!(
                    "unipotent size must lie in 2..={MAX_UNIPOTENT}, got {n}"
                )));
            }
            out.push((*n, BTreeSet::new()));
        }
        GroupSpec::ErasedUnipotent { size, erased } => {
            if !(2..=MAX_UNIPOTENT).contains(size) {
                return Err(Error::InvalidGroup(format!(
                    "unipotent size must lie in 2..={MAX_UNIPOTENT}, got {size}"
                )));
            }
            check_upward_closed(*size, erased)?;
            if erased.len() == size * (size - 1) / 2 {
                return Err(Error::InvalidGroup("every coordinate is erased".into()));
            }
            out.push((*size, erased.clone()));
        }
        GroupSpec::DirectProduct(factors) => {
            if factors.is_empty() {
                return Err(Error::InvalidGroup("empty direct product".into()));
            }
            for f in factors {
                flatten(f, out)?;
            }
        }
    }
    Ok(())
}

impl Group {
    pub fn new(spec: &GroupSpec) -> Result<Group> {
        let spec = spec.clone().normalized();
        let mut raw = Vec::new();
        flatten(&spec, &mut raw)?;

        let mut blocks = Vec::with_capacity(raw.len());
        let mut coords = Vec::new();
        let mut block_of = Vec::new();
        for (b, (size, erased)) in raw.into_iter().enumerate() {
            let offset = coords.len();
            let mut index = vec![None; size * size];
            for span in 1..size {
                for i in 1..=size - span {
                    let j = i + span;
                    if erased.contains(&(i, j)) {
                        continue;
                    }
                    index[(i - 1) * size + (j - 1)] = Some(coords.len());
                    coords.push(Coordinate {
                        factor: b,
                        pos: (i, j),
                        live: true,
                    });
                    block_of.push(b);
                }
            }
            let heisenberg = size == 3 && erased.is_empty();
            blocks.push(Block {
                size,
                offset,
                len: coords.len() - offset,
                erased,
                index,
                heisenberg,
            });
        }

        let mut terms = vec![Vec::new(); coords.len()];
        for block in &blocks {
            for t in block.offset..block.offset + block.len {
                let (i, j) = coords[t].pos;
                for k in i + 1..j {
                    if let (Some(a), Some(c)) = (block.index(i, k), block.index(k, j)) {
                        terms[t].push((a as u32, c as u32));
                    }
                }
            }
        }
        let layout = Layout::new(terms);

        let multi = blocks.len() > 1;
        let mut default_gens = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            let prefix = if multi { format!("{b}:") } else { String::new() };
            let mut push = |name: String, idx: usize| {
                let mut v = vec![BigInt::zero(); coords.len()];
                v[idx] = BigInt::one();
                default_gens.push((format!("{prefix}{name}"), v));
            };
            if block.size == 2 {
                push("t".into(), block.offset);
            } else if block.heisenberg {
                push("x".into(), block.index(1, 2).unwrap());
                push("y".into(), block.index(2, 3).unwrap());
                push("z".into(), block.index(1, 3).unwrap());
            } else {
                // an erased superdiagonal entry maps to the identity of the quotient
                for i in 1..block.size {
                    if let Some(idx) = block.index(i, i + 1) {
                        push(format!("e{i}{}", i + 1), idx);
                    }
                }
            }
        }

        Ok(Group(Arc::new(GroupInner {
            spec,
            blocks,
            coords,
            block_of,
            layout,
            default_gens,
            series: OnceLock::new(),
        })))
    }

    pub fn parse(text: &str) -> Result<Group> {
        Group::new(&text.parse()?)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0.spec
    }

    /// Number of live coordinates, i.e. the Hirsch length.
    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.0.coords
    }

    pub fn blocks(&self) -> &[Block] {
        &self.0.blocks
    }

    pub fn block_of(&self, coord: usize) -> usize {
        self.0.block_of[coord]
    }

    /// Every strictly upper entry of every factor, erased ones flagged `live: false`.
    pub fn all_positions(&self) -> Vec<Coordinate> {
        let mut out = Vec::new();
        for (b, block) in self.0.blocks.iter().enumerate() {
            for span in 1..block.size {
                for i in 1..=block.size - span {
                    out.push(Coordinate {
                        factor: b,
                        pos: (i, i + span),
                        live: !block.is_erased(i, i + span),
                    });
                }
            }
        }
        out
    }

    pub fn coord_index(&self, factor: usize, pos: (usize, usize)) -> Option<usize> {
        self.0.blocks.get(factor)?.index(pos.0, pos.1)
    }

    pub fn coord_name(&self, idx: usize) -> String {
        let c = &self.0.coords[idx];
        if self.0.blocks.len() > 1 {
            format!("{}:e{}{}", c.factor, c.pos.0, c.pos.1)
        } else {
            format!("e{}{}", c.pos.0, c.pos.1)
        }
    }

    pub fn is_free_abelian(&self) -> bool {
        self.0.blocks.iter().all(|b| b.size == 2)
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.0.layout
    }

    pub(crate) fn series_cell(&self) -> &OnceLock<Result<Series>> {
        &self.0.series
    }

    pub fn identity(&self) -> Element {
        Element {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.dim()],
        }
    }

    /// The elementary matrix of live coordinate `idx`.
    pub fn basis(&self, idx: usize) -> Element {
        let mut coords = vec![BigInt::zero(); self.dim()];
        coords[idx] = BigInt::one();
        Element {
            group: self.clone(),
            coords,
        }
    }

    pub fn from_coords(&self, coords: Vec<BigInt>) -> Result<Element> {
        if coords.len() != self.dim() {
            return Err(Error::Invalid(format!(
                "coordinate vector has length {}, expected {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(Element {
            group: self.clone(),
            coords,
        })
    }

    pub fn from_ints(&self, coords: &[i64]) -> Result<Element> {
        self.from_coords(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn default_gens(&self) -> GeneratingSet {
        GeneratingSet {
            group: self.clone(),
            names: self.0.default_gens.iter().map(|(n, _)| n.clone()).collect(),
            elements: self
                .0
                .default_gens
                .iter()
                .map(|(_, v)| Element {
                    group: self.clone(),
                    coords: v.clone(),
                })
                .collect(),
        }
    }
}

/// A group element as its vector of live matrix entries.
#[derive(Clone)]
pub struct Element {
    group: Group,
    coords: Vec<BigInt>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.coords == other.coords
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        write!(f, "{{")?;
        let mut first = true;
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}:{}", self.group.coord_name(idx), c)?;
        }
        write!(f, "}}")
    }
}

impl Element {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord_vector(&self) -> Vec<BigInt> {
        self.coords.clone()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| !self.coords[i].is_zero()).collect()
    }

    fn same_group(&self, other: &Element) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::MixedGroups)
        }
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_group(other)?;
        let coords = self
            .group
            .layout()
            .mul(&self.coords, &other.coords)
            .expect("big integer arithmetic cannot overflow");
        Ok(Element {
            group: self.group.clone(),
            coords,
        })
    }

    pub fn inv(&self) -> Element {
        let coords = self
            .group
            .layout()
            .inv(&self.coords)
            .expect("big integer arithmetic cannot overflow");
        Element {
            group: self.group.clone(),
            coords,
        }
    }

    pub fn pow(&self, k: i64) -> Element {
        self.pow_big(&BigInt::from(k))
    }

    /// Repeated squaring; negative exponents go through the inverse.
    pub fn pow_big(&self, k: &BigInt) -> Element {
        let mut base = if k.is_negative() { self.inv() } else { self.clone() };
        let mut e = k.abs();
        let mut acc = self.group.identity();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if (&e % &two).is_one() {
                acc = &acc * &base;
            }
            e /= &two;
            if !e.is_zero() {
                base = &base * &base;
            }
        }
        acc
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &Element) -> Result<Element> {
        self.same_group(other)?;
        Ok(&(&(self * other) * &self.inv()) * &other.inv())
    }

    /// Left-nested `[[[g, x1], x2], ..., xk]`.
    pub fn iterated_commutator(&self, xs: &[Element]) -> Result<Element> {
        let mut acc = self.clone();
        for x in xs {
            acc = acc.commutator(x)?;
        }
        Ok(acc)
    }

    /// `h g h⁻¹`.
    pub fn conjugate_by(&self, h: &Element) -> Result<Element> {
        self.same_group(h)?;
        Ok(&(h * self) * &h.inv())
    }

    /// Full unipotent matrices, one per factor, with erased entries zero.
    pub fn matrices(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.group
            .blocks()
            .iter()
            .map(|block| {
                let n = block.size;
                let mut m = vec![vec![BigInt::zero(); n]; n];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = BigInt::one();
                }
                for t in block.offset..block.offset + block.len {
                    let (i, j) = self.group.coords()[t].pos;
                    m[i - 1][j - 1] = self.coords[t].clone();
                }
                m
            })
            .collect()
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;

    /// Panics on elements of different groups; use [`Element::mul`] to get an error instead.
    fn mul(self, rhs: &'a Element) -> Element {
        Element::mul(self, rhs).expect("multiplying elements of different groups")
    }
}

/// A named finite list of elements; inverses are added implicitly by the metric code.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    group: Group,
    names: Vec<String>,
    elements: Vec<Element>,
}

impl GeneratingSet {
    pub fn new(group: &Group, named: Vec<(String, Element)>) -> Result<GeneratingSet> {
        if named.is_empty() {
            return Err(Error::NotGenerating("empty generating set".into()));
        }
        let mut names = Vec::new();
        let mut elements = Vec::new();
        for (name, e) in named {
            if e.group() != group {
                return Err(Error::MixedGroups);
            }
            names.push(name);
            elements.push(e);
        }
        Ok(GeneratingSet {
            group: group.clone(),
            names,
            elements,
        })
    }

    /// Parses a comma-separated list of words. A word is a product of tokens
    /// separated by `*` or whitespace; a token is a default generator name
    /// (`x`, `e23`, `1:t`) or a basis entry (`e14`, `0:e13`), optionally
    /// raised to an integer power with `^`.
    pub fn parse(group: &Group, text: &str) -> Result<GeneratingSet> {
        let defaults = group.default_gens();
        let mut named = Vec::new();
        for word in text.split(',') {
            let word = word.trim();
            if word.is_empty() {
                return Err(Error::Invalid(format!("empty generator in '{text}'")));
            }
            let mut acc = group.identity();
            for token in word.split(|c: char| c == '*' || c.is_whitespace()) {
                if token.is_empty() {
                    continue;
                }
                let (base, exp) = match token.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<i64>()
                            .map_err(|_| Error::Invalid(format!("bad exponent in '{token}'")))?,
                    ),
                    None => (token, 1),
                };
                let elem = if let Some(pos) = defaults.names.iter().position(|n| n == base) {
                    defaults.elements[pos].clone()
                } else {
                    parse_basis(group, base)?
                };
                acc = &acc * &elem.pow(exp);
            }
            named.push((word.to_string(), acc));
        }
        GeneratingSet::new(group, named)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Generators and their inverses, deduplicated, identity removed, in a fixed order.
    pub fn symmetric(&self) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        for e in &self.elements {
            for cand in [e.clone(), e.inv()] {
                if !cand.is_identity() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out
    }

    pub(crate) fn symmetric_scalars<T: Scalar>(&self) -> Option<Vec<Vec<T>>> {
        self.symmetric()
            .iter()
            .map(|e| e.coords().iter().map(T::from_big).collect::<Option<Vec<T>>>())
            .collect()
    }

    pub fn with_extra(&self, name: &str, element: Element) -> Result<GeneratingSet> {
        let mut named: Vec<(String, Element)> =
            self.names.iter().cloned().zip(self.elements.iter().cloned()).collect();
        named.push((name.to_string(), element));
        GeneratingSet::new(&self.group, named)
    }
}

fn parse_basis(group: &Group, token: &str) -> Result<Element> {
    let bad = || Error::Invalid(format!("unknown generator '{token}'"));
    let (factor, name) = match token.split_once(':') {
        Some((f, n)) => (f.parse::<usize>().map_err(|_| bad())?, n),
        None if group.blocks().len() == 1 => (0, token),
        None => return Err(bad()),
    };
    let digits = name.strip_prefix('e').ok_or_else(bad)?;
    let ds: Vec<usize> = digits
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()
        .ok_or_else(bad)?;
    if ds.len() != 2 {
        return Err(bad());
    }
    let idx = group.coord_index(factor, (ds[0], ds[1])).ok_or_else(bad)?;
    Ok(group.basis(idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma() -> Group {
        make_group(&GroupSpec::gamma()).unwrap()
    }

    fn idx(g: &Group, i: usize, j: usize) -> usize {
        g.coord_index(0, (i, j)).unwrap()
    }

    #[test]
    fn coordinate_counts() {
        assert_eq!(gamma().dim(), 8);
        assert_eq!(make_group(&GroupSpec::FreeAbelian(1)).unwrap().dim(), 1);
        assert_eq!(make_group(&GroupSpec::Unipotent(5)).unwrap().dim(), 10);
        assert_eq!(make_group(&GroupSpec::Unipotent(6)).unwrap().dim(), 15);
    }

    #[test]
    fn coordinates_are_ordered_by_span_then_row() {
        let g = make_group(&GroupSpec::Unipotent(4)).unwrap();
        let pos: Vec<_> = g.coords().iter().map(|c| c.pos).collect();
        assert_eq!(pos, vec![(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]);
        let pos: Vec<_> = gamma().coords().iter().map(|c| c.pos).collect();
        assert_eq!(
            pos,
            vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (2, 4), (3, 5), (2, 5)]
        );
    }

    #[test]
    fn rejects_non_upward_closed_erasure() {
        let spec = GroupSpec::ErasedUnipotent {
            size: 4,
            erased: [(2, 3)].into_iter().collect(),
        };
        match make_group(&spec) {
            Err(Error::NotUpwardClosed(2, 3, i, j)) => assert!((i, j) != (2, 3)),
            other => panic!("{other:?}"),
        }
        let spec = GroupSpec::ErasedUnipotent {
            size: 5,
            erased: [(1, 4)].into_iter().collect(),
        };
        assert!(matches!(make_group(&spec), Err(Error::NotUpwardClosed(1, 4, 1, 5))));
        assert!(make_group(&GroupSpec::Unipotent(7)).is_err());
        assert!(make_group(&GroupSpec::FreeAbelian(0)).is_err());
    }

    #[test]
    fn heisenberg_product_and_commutator() {
        let h = make_group(&GroupSpec::heisenberg()).unwrap();
        let gens = h.default_gens();
        assert_eq!(gens.names(), ["x", "y", "z"]);
        let (x, y, z) = (&gens.elements()[0], &gens.elements()[1], &gens.elements()[2]);
        let xy = x * y;
        assert_eq!(xy.matrices()[0][0][2], BigInt::one());
        assert_ne!(xy, y * x);
        assert_eq!(&xy * &(y * x).inv(), *z);
        assert_eq!(x.commutator(y).unwrap(), *z);
    }

    #[test]
    fn erasure_drops_the_corner() {
        let g = gamma();
        let p = &g.basis(idx(&g, 1, 2)) * &g.basis(idx(&g, 2, 4));
        let mut want = vec![BigInt::zero(); 8];
        want[idx(&g, 1, 2)] = BigInt::one();
        want[idx(&g, 2, 4)] = BigInt::one();
        assert_eq!(p.coord_vector(), want);
    }

    #[test]
    fn commutator_examples() {
        let u3 = make_group(&GroupSpec::Unipotent(3)).unwrap();
        assert_eq!(
            u3.basis(idx(&u3, 1, 2)).commutator(&u3.basis(idx(&u3, 2, 3))).unwrap(),
            u3.basis(idx(&u3, 1, 3))
        );
        let u4 = make_group(&GroupSpec::Unipotent(4)).unwrap();
        let e = |i, j| u4.basis(idx(&u4, i, j));
        assert!(e(1, 2).commutator(&e(3, 4)).unwrap().is_identity());
        assert_eq!(
            e(1, 2).iterated_commutator(&[e(2, 3), e(3, 4)]).unwrap(),
            e(1, 4)
        );
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let a = make_group(&GroupSpec::Unipotent(3)).unwrap().basis(0);
        let b = make_group(&GroupSpec::Unipotent(4)).unwrap().basis(0);
        assert_eq!(a.mul(&b), Err(Error::MixedGroups));
        assert!(a.commutator(&b).is_err());
    }

    #[test]
    fn powers() {
        let h = make_group(&GroupSpec::heisenberg()).unwrap();
        let xy = &h.basis(0) * &h.basis(1);
        let mut acc = h.identity();
        for k in 0..12 {
            assert_eq!(xy.pow(k), acc);
            assert_eq!(xy.pow(-k), acc.inv());
            acc = &acc * &xy;
        }
    }

    #[test]
    fn generator_parsing() {
        let h = make_group(&GroupSpec::heisenberg()).unwrap();
        let gens = GeneratingSet::parse(&h, "x, y, x*y^2, e13^-1").unwrap();
        assert_eq!(gens.len(), 4);
        assert_eq!(gens.elements()[2], &h.basis(0) * &h.basis(1).pow(2));
        assert_eq!(gens.elements()[3], h.basis(2).inv());
        assert!(GeneratingSet::parse(&h, "x, w").is_err());
        let p = Group::parse("heisenberg * z").unwrap();
        let names = p.default_gens().names().to_vec();
        assert_eq!(names, ["0:x", "0:y", "0:z", "1:t"]);
        assert!(GeneratingSet::parse(&p, "0:x, 1:t, 0:e13").is_ok());
        assert!(GeneratingSet::parse(&p, "e13").is_err());
    }
}
