//! Coordinate-lattice normal subgroups and full-detection checks.
//!
//! A moduli vector `m` defines `N = {g : m_c | g_c for every live c}`. The
//! divisibility constraints checked here are exactly what makes `N` a normal
//! subgroup, and its index is `∏ m_c`. Reducing coordinates mod `m` is then a
//! complete invariant of the coset `gN`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group};
use crate::metric::{coordinate_bounds, enumerate_ball, Ball};

/// One divisibility requirement on a moduli vector (global coordinate indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `m_target | m_left · m_right`, from `e_ik · e_kj`.
    Closure { target: usize, left: usize, right: usize },
    /// `m_target | m_inner`, from conjugating `e_kl` by flank entries.
    Conjugation { target: usize, inner: usize },
}

impl Constraint {
    pub fn target(&self) -> usize {
        match *self {
            Constraint::Closure { target, .. } | Constraint::Conjugation { target, .. } => target,
        }
    }

    pub fn holds(&self, moduli: &[BigInt]) -> bool {
        match *self {
            Constraint::Closure { target, left, right } => {
                (&moduli[left] * &moduli[right]).is_multiple_of(&moduli[target])
            }
            Constraint::Conjugation { target, inner } => moduli[inner].is_multiple_of(&moduli[target]),
        }
    }

    pub fn describe(&self, group: &Group) -> String {
        let pos = |c: usize| {
            let (i, j) = group.coords()[c].pos;
            format!("({i},{j})")
        };
        match *self {
            Constraint::Closure { target, left, right } => format!(
                "closure: m{} must divide m{}·m{}",
                pos(target),
                pos(left),
                pos(right)
            ),
            Constraint::Conjugation { target, inner } => {
                format!("conjugation: m{} must divide m{}", pos(target), pos(inner))
            }
        }
    }

    /// A pair `(g, h)` with `g, h ∈ N` and `g·h ∉ N` (closure), or `g ∈ N`
    /// and `h·g·h⁻¹ ∉ N` (conjugation), whenever this constraint fails.
    pub fn counterexample(&self, group: &Group, moduli: &[BigInt]) -> (Element, Element) {
        match *self {
            Constraint::Closure { left, right, .. } => (
                group.basis(left).pow_big(&moduli[left]),
                group.basis(right).pow_big(&moduli[right]),
            ),
            Constraint::Conjugation { target, inner } => {
                let outer = group.coords()[target];
                let (i, j) = outer.pos;
                let (k, l) = group.coords()[inner].pos;
                let mut h = group.identity();
                if i < k {
                    h = &h * &group.basis(group.coord_index(outer.factor, (i, k)).expect("live flank"));
                }
                if l < j {
                    h = &h * &group.basis(group.coord_index(outer.factor, (l, j)).expect("live flank"));
                }
                (group.basis(inner).pow_big(&moduli[inner]), h)
            }
        }
    }
}

/// All constraints of a group, in a fixed order.
pub fn constraints(group: &Group) -> Vec<Constraint> {
    let mut out = Vec::new();
    for block in group.blocks() {
        let live_or_diag = |a: usize, b: usize| a == b || block.index(a, b).is_some();
        for t in block.offset..block.offset + block.len {
            let (i, j) = group.coords()[t].pos;
            for k in i + 1..j {
                if let (Some(left), Some(right)) = (block.index(i, k), block.index(k, j)) {
                    out.push(Constraint::Closure { target: t, left, right });
                }
            }
            for k in i..j {
                for l in k + 1..=j {
                    if (k, l) == (i, j) {
                        continue;
                    }
                    if let Some(inner) = block.index(k, l) {
                        if live_or_diag(i, k) && live_or_diag(l, j) {
                            out.push(Constraint::Conjugation { target: t, inner });
                        }
                    }
                }
            }
        }
    }
    out
}

/// First violated constraint, if any.
pub fn find_violation(group: &Group, moduli: &[BigInt]) -> Option<Constraint> {
    constraints(group).into_iter().find(|c| !c.holds(moduli))
}

/// A validated coordinate-lattice normal subgroup.
#[derive(Clone)]
pub struct LatticeSubgroup {
    group: Group,
    moduli: Vec<BigInt>,
    certificate: Vec<Constraint>,
}

impl fmt::Debug for LatticeSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeSubgroup({}, {})", self.group, self)
    }
}

impl fmt::Display for LatticeSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn lattice_subgroup(group: &Group, moduli: Vec<BigInt>) -> Result<LatticeSubgroup> {
    LatticeSubgroup::new(group, moduli)
}

impl LatticeSubgroup {
    pub fn new(group: &Group, moduli: Vec<BigInt>) -> Result<Self> {
        if moduli.len() != group.dim() {
            return Err(Error::InvalidModuli(format!(
                "{} moduli given, {} has {} coordinates",
                moduli.len(),
                group,
                group.dim()
            )));
        }
        if let Some(c) = moduli.iter().position(|m| !m.is_positive()) {
            return Err(Error::InvalidModuli(format!(
                "modulus of {} must be positive, got {}",
                group.coord_name(c),
                moduli[c]
            )));
        }
        let certificate = constraints(group);
        if let Some(bad) = certificate.iter().find(|c| !c.holds(&moduli)) {
            return Err(Error::InvalidModuli(bad.describe(group)));
        }
        Ok(LatticeSubgroup {
            group: group.clone(),
            moduli,
            certificate,
        })
    }

    pub fn from_ints(group: &Group, moduli: &[u64]) -> Result<Self> {
        Self::new(group, moduli.iter().map(|&m| BigInt::from(m)).collect())
    }

    pub fn uniform(group: &Group, m: &BigInt) -> Result<Self> {
        Self::new(group, vec![m.clone(); group.dim()])
    }

    /// Moduli `scale_b · n^{w_c}` with one scale per factor.
    pub fn graded(group: &Group, weights: &[usize], n: u64, scales: &[BigInt]) -> Result<Self> {
        let moduli = (0..group.dim())
            .map(|c| &scales[group.block_of(c)] * BigInt::from(n).pow(weights[c] as u32))
            .collect();
        Self::new(group, moduli)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// The constraints that were checked when this subgroup was accepted.
    pub fn certificate(&self) -> &[Constraint] {
        &self.certificate
    }

    pub fn index(&self) -> BigInt {
        self.moduli.iter().product()
    }

    /// Elements of another group are never members.
    pub fn contains(&self, g: &Element) -> bool {
        g.group() == &self.group
            && g.coords().iter().zip(&self.moduli).all(|(x, m)| x.is_multiple_of(m))
    }

    /// Coordinates reduced into `[0, m_c)`; equal exactly on cosets of `N`.
    pub fn residues(&self, g: &Element) -> Vec<BigInt> {
        g.coords().iter().zip(&self.moduli).map(|(x, m)| x.mod_floor(m)).collect()
    }

    /// Mixed-radix code of the residues, in `[0, index)`.
    pub fn residue_code(&self, g: &Element) -> BigInt {
        let mut code = BigInt::zero();
        for (r, m) in self.residues(g).iter().zip(&self.moduli).rev() {
            code = code * m + r;
        }
        code
    }

    fn small_moduli(&self) -> Option<Vec<i64>> {
        self.moduli.iter().map(ToPrimitive::to_i64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMethod {
    CertifiedByBounds,
    Exhaustive,
}

impl fmt::Display for DetectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionMethod::CertifiedByBounds => "certified-by-bounds",
            DetectionMethod::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub coord: usize,
    pub bound: BigInt,
    pub modulus: BigInt,
}

impl BoundRow {
    pub fn ok(&self) -> bool {
        self.bound < self.modulus
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    /// `β_c(2n)` against `m_c` for every coordinate.
    Bounds(Vec<BoundRow>),
    /// A nontrivial element of `B(2n) ∩ N` with its word length.
    Collision { element: Element, length: u32 },
    None,
}

#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub detected: bool,
    pub method: DetectionMethod,
    pub witness: Witness,
}

fn same_group(group: &Group, gens: &GeneratingSet, sub: &LatticeSubgroup) -> Result<()> {
    if gens.group() != group || sub.group() != group {
        return Err(Error::MixedGroups);
    }
    Ok(())
}

/// Sufficient test: `m_c > β_c(2n)` for every coordinate. A negative answer
/// means "not certified", never "not detected".
pub fn detect_ball_certified(
    group: &Group,
    gens: &GeneratingSet,
    n: u64,
    sub: &LatticeSubgroup,
) -> Result<DetectionResult> {
    same_group(group, gens, sub)?;
    let beta = coordinate_bounds(group, gens, 2 * n);
    let rows: Vec<BoundRow> = beta
        .bounds
        .into_iter()
        .zip(sub.moduli())
        .enumerate()
        .map(|(coord, (bound, m))| BoundRow {
            coord,
            bound,
            modulus: m.clone(),
        })
        .collect();
    Ok(DetectionResult {
        detected: rows.iter().all(BoundRow::ok),
        method: DetectionMethod::CertifiedByBounds,
        witness: Witness::Bounds(rows),
    })
}

/// Exact test over `B(2n)`: detected iff no nontrivial element of `B(2n)`
/// lies in `N`. The witness is the least such element by (length, coordinates).
pub fn detect_ball_exhaustive(
    group: &Group,
    gens: &GeneratingSet,
    n: u32,
    sub: &LatticeSubgroup,
    limit: usize,
) -> Result<DetectionResult> {
    same_group(group, gens, sub)?;
    let ball = enumerate_ball(group, gens, 2 * n, limit)?;
    detect_in_ball(&ball, sub)
}

/// Exhaustive detection of `B(r)` given the already enumerated ball `B(2r)`.
pub fn detect_in_ball(ball: &Ball, sub: &LatticeSubgroup) -> Result<DetectionResult> {
    let group = ball.group();
    if sub.group() != group {
        return Err(Error::MixedGroups);
    }
    let small = ball.small_keys().zip(sub.small_moduli());
    let best: Option<(u32, Vec<BigInt>)> = match small {
        Some((keys, m)) => keys
            .into_iter()
            .filter(|(k, _)| k.iter().any(|&x| x != 0))
            .filter(|(k, _)| k.iter().zip(&m).all(|(x, m)| x % m == 0))
            .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)))
            .map(|(k, l)| (l, k.iter().map(|&x| BigInt::from(x)).collect())),
        None => ball
            .entries()
            .into_iter()
            .filter(|(k, _)| k.iter().any(|x| !x.is_zero()))
            .filter(|(k, _)| k.iter().zip(sub.moduli()).all(|(x, m)| x.is_multiple_of(m)))
            .map(|(k, l)| (l, k))
            .min(),
    };
    Ok(match best {
        None => DetectionResult {
            detected: true,
            method: DetectionMethod::Exhaustive,
            witness: Witness::None,
        },
        Some((length, coords)) => DetectionResult {
            detected: false,
            method: DetectionMethod::Exhaustive,
            witness: Witness::Collision {
                element: group.from_coords(coords)?,
                length,
            },
        },
    })
}

/// Per-coordinate exponents `w_c` for graded moduli `n^{w_c}`, and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinWeights {
    pub weights: Vec<usize>,
    pub exponent: usize,
}

/// `w_c` is the largest coordinate weight over live superintervals of `c`.
/// This is the least assignment with `w_c ≥ weight(c)` that is monotone under
/// containment, which the conjugation constraints require of `n^{w_c}`.
pub fn solve_min_weights(group: &Group) -> Result<MinWeights> {
    let series = group.series()?;
    let mut w: Vec<usize> = series.weights().to_vec();
    let coords = group.coords();
    // coordinates are ordered by span within each factor, so a reverse sweep
    // sees both immediate superintervals before the interval itself
    for t in (0..group.dim()).rev() {
        let c = coords[t];
        let block = &group.blocks()[c.factor];
        let (i, j) = c.pos;
        let mut best = w[t];
        if i > 1 {
            if let Some(s) = block.index(i - 1, j) {
                best = best.max(w[s]);
            }
        }
        if let Some(s) = block.index(i, j + 1) {
            best = best.max(w[s]);
        }
        w[t] = best;
    }
    for con in constraints(group) {
        let ok = match con {
            Constraint::Closure { target, left, right } => w[target] <= w[left] + w[right],
            Constraint::Conjugation { target, inner } => w[target] <= w[inner],
        };
        if !ok {
            return Err(Error::Internal(format!(
                "weight solution violates {} in {group}",
                con.describe(group)
            )));
        }
    }
    for n in [2u64, 3] {
        let scales = vec![BigInt::one(); group.blocks().len()];
        LatticeSubgroup::graded(group, &w, n, &scales)
            .map_err(|e| Error::Internal(format!("weight solution rejected at n = {n}: {e}")))?;
    }
    let exponent = w.iter().sum();
    Ok(MinWeights { weights: w, exponent })
}

/// Graded moduli `K_b · n^{w_c}` with the least per-factor scale `K_b`
/// such that `m_c > β_c(2n)` on every coordinate of the factor.
pub fn certified_graded_subgroup(group: &Group, gens: &GeneratingSet, n: u64) -> Result<LatticeSubgroup> {
    if n == 0 {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    let w = solve_min_weights(group)?.weights;
    let beta = coordinate_bounds(group, gens, 2 * n);
    let mut scales = vec![BigInt::one(); group.blocks().len()];
    for (c, b) in beta.bounds.iter().enumerate() {
        let unit = BigInt::from(n).pow(w[c] as u32);
        let k = b / &unit + 1;
        let s = &mut scales[group.block_of(c)];
        if k > *s {
            *s = k;
        }
    }
    LatticeSubgroup::graded(group, &w, n, &scales)
}

/// Outcome of the minimal-index lattice search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub subgroup: LatticeSubgroup,
    pub index: BigInt,
    /// `|B(n)|`, a lower bound for the index of any detecting quotient.
    pub ball_size: usize,
    pub candidates: usize,
}

/// Smallest-index valid lattice subgroup with all moduli `≤ cap` that
/// exhaustively detects `B(n)`; ties go to the lexicographically smallest moduli.
pub fn min_quotient_search(
    group: &Group,
    gens: &GeneratingSet,
    n: u32,
    cap: u64,
    budget: u128,
    limit: usize,
) -> Result<SearchResult> {
    if gens.group() != group {
        return Err(Error::MixedGroups);
    }
    if cap == 0 {
        return Err(Error::Invalid("modulus cap must be positive".into()));
    }
    let dim = group.dim() as u32;
    let size = (cap as u128).checked_pow(dim).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::Budget { size, budget });
    }
    let ball_size = enumerate_ball(group, gens, n, limit)?.len();
    let wide = enumerate_ball(group, gens, 2 * n, limit)?;
    let cons = constraints(group);

    let mut cands: Vec<Vec<u64>> = Vec::new();
    let mut current = vec![1u64; dim as usize];
    'odometer: loop {
        let index: u128 = current.iter().map(|&m| m as u128).product();
        if index >= ball_size as u128 {
            let big: Vec<BigInt> = current.iter().map(|&m| BigInt::from(m)).collect();
            if cons.iter().all(|c| c.holds(&big)) {
                cands.push(current.clone());
            }
        }
        for pos in (0..current.len()).rev() {
            if current[pos] < cap {
                current[pos] += 1;
                continue 'odometer;
            }
            current[pos] = 1;
        }
        break;
    }
    cands.sort_by(|a, b| {
        let ia: u128 = a.iter().map(|&m| m as u128).product();
        let ib: u128 = b.iter().map(|&m| m as u128).product();
        ia.cmp(&ib).then_with(|| a.cmp(b))
    });

    let nontrivial: Vec<Vec<BigInt>> = wide
        .entries()
        .into_iter()
        .map(|(k, _)| k)
        .filter(|k| k.iter().any(|x| !x.is_zero()))
        .collect();
    let small: Option<Vec<Vec<i64>>> = nontrivial
        .iter()
        .map(|k| k.iter().map(ToPrimitive::to_i64).collect())
        .collect();
    let detects = |m: &Vec<u64>| -> bool {
        match &small {
            Some(keys) => !keys
                .iter()
                .any(|k| k.iter().zip(m).all(|(&x, &m)| x % m as i64 == 0)),
            None => !nontrivial.iter().any(|k| {
                k.iter()
                    .zip(m)
                    .all(|(x, &m)| x.is_multiple_of(&BigInt::from(m)))
            }),
        }
    };
    let found = cands.par_iter().position_first(detects).ok_or_else(|| {
        Error::Invalid(format!(
            "no lattice subgroup with moduli ≤ {cap} detects B({n}); raise the cap"
        ))
    })?;
    let subgroup = LatticeSubgroup::from_ints(group, &cands[found])?;
    Ok(SearchResult {
        index: subgroup.index(),
        subgroup,
        ball_size,
        candidates: cands.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectResult {
    pub injective: bool,
    /// Positions `(i, j)`, `i < j`, of the first pair with equal images.
    pub collision: Option<(usize, usize)>,
    pub checked: usize,
}

const DENSE_CODES: u64 = 1 << 26;

/// Whether `G → G/N` is injective on the given elements.
pub fn inject_check(
    sub: &LatticeSubgroup,
    elements: impl IntoIterator<Item = Element>,
) -> Result<InjectResult> {
    let index = sub.index();
    let dense = index.to_u64().filter(|&i| i <= DENSE_CODES);
    let mut table: Vec<u32> = dense.map(|i| vec![0u32; i as usize]).unwrap_or_default();
    let mut map: FxHashMap<BigInt, usize> = FxHashMap::default();
    let mut checked = 0;
    for (pos, g) in elements.into_iter().enumerate() {
        if g.group() != sub.group() {
            return Err(Error::MixedGroups);
        }
        checked += 1;
        let code = sub.residue_code(&g);
        let earlier = if dense.is_some() {
            let slot = &mut table[code.to_usize().expect("code below index")];
            if *slot == 0 {
                *slot = u32::try_from(pos + 1).map_err(|_| Error::Internal("too many elements".into()))?;
                None
            } else {
                Some(*slot as usize - 1)
            }
        } else {
            match map.get(&code) {
                Some(&i) => Some(i),
                None => {
                    map.insert(code, pos);
                    None
                }
            }
        };
        if let Some(i) = earlier {
            return Ok(InjectResult {
                injective: false,
                collision: Some((i, pos)),
                checked,
            });
        }
    }
    Ok(InjectResult {
        injective: true,
        collision: None,
        checked,
    })
}

/// Products `∏_c e_c^{α_c}` over coordinates in order, with `0 ≤ α_c < n^{w_c}`.
/// Enumerated in lexicographic order of `α`, reusing prefix products.
pub fn weighted_box(group: &Group, weights: &[usize], n: u64) -> impl Iterator<Item = Element> {
    let group = group.clone();
    let dim = group.dim();
    let ranges: Vec<u64> = weights.iter().map(|&w| n.pow(w as u32)).collect();
    let basis: Vec<Element> = (0..dim).map(|c| group.basis(c)).collect();
    let mut alpha = vec![0u64; dim];
    // prefix[c] = ∏_{c' < c} e_{c'}^{α_{c'}}
    let mut prefix = vec![group.identity(); dim + 1];
    let mut done = ranges.contains(&0);
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = prefix[dim].clone();
        let mut c = dim;
        loop {
            if c == 0 {
                done = true;
                break;
            }
            c -= 1;
            alpha[c] += 1;
            if alpha[c] < ranges[c] {
                break;
            }
            alpha[c] = 0;
        }
        if !done {
            for t in c..dim {
                prefix[t + 1] = &prefix[t] * &basis[t].pow(alpha[t] as i64);
            }
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DEFAULT_LIMIT;

    fn g(spec: &str) -> Group {
        Group::parse(spec).unwrap()
    }

    fn big(xs: &[u64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn heisenberg_examples() {
        let h = g("heisenberg");
        let n = LatticeSubgroup::from_ints(&h, &[9, 9, 9]).unwrap();
        assert_eq!(n.index(), BigInt::from(729));
        let err = LatticeSubgroup::from_ints(&h, &[3, 3, 9]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(1,3)") && msg.contains("(1,2)"), "{msg}");
        let con = find_violation(&h, &big(&[3, 3, 9])).unwrap();
        let (x3, y) = con.counterexample(&h, &big(&[3, 3, 9]));
        assert_eq!(x3, h.basis(0).pow(3));
        let conj = x3.conjugate_by(&y).unwrap();
        assert!(!conj.coords()[2].is_multiple_of(&BigInt::from(9)));
    }

    #[test]
    fn gamma_graded_moduli() {
        let gm = g("gamma");
        let w = solve_min_weights(&gm).unwrap();
        assert_eq!(w.exponent, 22);
        let sub = LatticeSubgroup::graded(&gm, &w.weights, 2, &[BigInt::one()]).unwrap();
        assert_eq!(sub.index(), BigInt::from(4_194_304u64));
        for c in 0..gm.dim() {
            let pos = gm.coords()[c].pos;
            let expect = if pos == (1, 2) || pos == (1, 3) { 4 } else { 8 };
            assert_eq!(sub.moduli()[c], BigInt::from(expect), "{pos:?}");
        }
    }

    #[test]
    fn integer_membership() {
        let z = g("z");
        let n = LatticeSubgroup::from_ints(&z, &[7]).unwrap();
        assert!(n.contains(&z.from_ints(&[14]).unwrap()));
        assert!(!n.contains(&z.from_ints(&[3]).unwrap()));
        assert_eq!(n.index(), BigInt::from(7));
    }

    #[test]
    fn uniform_heisenberg_membership() {
        let h = g("heisenberg");
        let m = 6;
        let n = LatticeSubgroup::uniform(&h, &BigInt::from(m)).unwrap();
        assert!(n.contains(&h.basis(2).pow(m)));
        for a in 1..m {
            assert!(!n.contains(&h.basis(0).pow(a)));
        }
    }

    #[test]
    fn solver_exponents() {
        for (spec, b) in [("heisenberg", 6), ("heisenberg * z", 7), ("gamma", 22), ("u(4)", 18), ("u(5)", 40), ("z^3", 3), ("z", 1)] {
            assert_eq!(solve_min_weights(&g(spec)).unwrap().exponent, b, "{spec}");
        }
        assert_eq!(solve_min_weights(&g("heisenberg")).unwrap().weights, vec![2, 2, 2]);
    }

    #[test]
    fn certified_detection() {
        let z = g("z");
        for n in 1..30u64 {
            let sub = LatticeSubgroup::from_ints(&z, &[2 * n + 1]).unwrap();
            assert!(detect_ball_certified(&z, &z.default_gens(), n, &sub).unwrap().detected);
        }
        let h = g("heisenberg");
        for n in 1..=64u64 {
            let sub = LatticeSubgroup::uniform(&h, &BigInt::from(8 * n * n + 1)).unwrap();
            assert!(detect_ball_certified(&h, &h.default_gens(), n, &sub).unwrap().detected);
        }
    }

    #[test]
    fn exhaustive_detection() {
        let z = g("z");
        let sub = LatticeSubgroup::from_ints(&z, &[10]).unwrap();
        let r = detect_ball_exhaustive(&z, &z.default_gens(), 5, &sub, DEFAULT_LIMIT).unwrap();
        assert!(!r.detected);
        match r.witness {
            Witness::Collision { element, length } => {
                assert_eq!(element, z.from_ints(&[-10]).unwrap());
                assert_eq!(length, 10);
            }
            other => panic!("{other:?}"),
        }
        let h = g("heisenberg");
        let sub = LatticeSubgroup::uniform(&h, &BigInt::from(100)).unwrap();
        assert!(detect_ball_exhaustive(&h, &h.default_gens(), 3, &sub, DEFAULT_LIMIT).unwrap().detected);
    }

    #[test]
    fn search_examples() {
        let z = g("z");
        for n in 1..=6u32 {
            let r = min_quotient_search(&z, &z.default_gens(), n, 20, 1 << 20, DEFAULT_LIMIT).unwrap();
            assert_eq!(r.index, BigInt::from(2 * n + 1));
        }
        let z2 = g("z^2");
        let r = min_quotient_search(&z2, &z2.default_gens(), 2, 10, 1 << 20, DEFAULT_LIMIT).unwrap();
        assert_eq!(r.index, BigInt::from(25));
        assert_eq!(r.subgroup.moduli(), &big(&[5, 5])[..]);
        let h = g("heisenberg");
        let r = min_quotient_search(&h, &h.default_gens(), 2, 12, 1 << 20, DEFAULT_LIMIT).unwrap();
        assert!(r.index >= BigInt::from(r.ball_size));
        assert!(matches!(
            min_quotient_search(&h, &h.default_gens(), 2, 1000, 1 << 20, DEFAULT_LIMIT),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn injectivity() {
        let z = g("z");
        let sub = LatticeSubgroup::from_ints(&z, &[5]).unwrap();
        let set = |k: i64| (0..k).map(|a| z.from_ints(&[a]).unwrap()).collect::<Vec<_>>();
        assert!(inject_check(&sub, set(5)).unwrap().injective);
        assert_eq!(inject_check(&sub, set(6)).unwrap().collision, Some((0, 5)));
    }

    #[test]
    fn heisenberg_box_injects() {
        let h = g("heisenberg");
        for n in 1..=4i64 {
            let m = 8 * n * n + 1;
            let sub = LatticeSubgroup::uniform(&h, &BigInt::from(m)).unwrap();
            let mut set = Vec::new();
            for a in 0..=n {
                for b in 0..=n {
                    for c in 0..=n * n {
                        let e = &(&h.basis(0).pow(a) * &h.basis(1).pow(b)) * &h.basis(2).pow(c);
                        set.push(e);
                    }
                }
            }
            assert!(inject_check(&sub, set).unwrap().injective);
        }
    }
}
