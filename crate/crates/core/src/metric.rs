//! Word-metric balls, word growth, coordinate bound propagation and distortion probes.
//!
//! Balls are enumerated breadth-first over coordinate vectors. Enumeration
//! first runs on `i64` coordinates and restarts on `BigInt` if any product
//! overflows, so results never depend on the machine word size.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::arith::{Layout, Scalar};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group};
use crate::growth::{fit_exponent, Cutoff, ExponentFit, GrowthSeries};
use crate::series::{center, element_weight};

/// Default cap on the number of ball elements held in memory.
pub const DEFAULT_LIMIT: usize = 10_000_000;

const INFEASIBLE_HINT: &str =
    "; exact enumeration is infeasible here, use certified bounds (`certify`, `bounds`) instead";

enum Stop {
    Overflow,
    Limit { states: usize },
}

/// Level-synchronous BFS over coordinate vectors.
/// First radius reaching each power, the radius explored, and why it stopped early.
type Reached = (Vec<Option<u32>>, u32, Option<String>);

struct Bfs<'a, T: Scalar> {
    layout: &'a Layout,
    gens: Vec<Box<[T]>>,
    seen: FxHashMap<Box<[T]>, u32>,
    frontier: Vec<Box<[T]>>,
    radius: u32,
    limit: usize,
    sizes: Vec<usize>,
}

impl<'a, T: Scalar> Bfs<'a, T> {
    fn new(layout: &'a Layout, gens: Vec<Vec<T>>, limit: usize) -> Self {
        let id: Box<[T]> = layout.identity::<T>().into();
        let mut seen = FxHashMap::default();
        seen.insert(id.clone(), 0);
        Bfs {
            layout,
            gens: gens.into_iter().map(Into::into).collect(),
            seen,
            frontier: vec![id],
            radius: 0,
            limit,
            sizes: vec![1],
        }
    }

    /// Extends the ball by one radius. The frontier is expanded in parallel;
    /// the merge is sequential and order-preserving, so the result does not
    /// depend on the thread count.
    fn step(&mut self) -> std::result::Result<(), Stop> {
        let layout = self.layout;
        let gens = &self.gens;
        let seen = &self.seen;
        let candidates: Option<Vec<Box<[T]>>> = self
            .frontier
            .par_iter()
            .flat_map_iter(|g| gens.iter().map(move |s| layout.mul(g, s)))
            .filter(|h| h.as_ref().is_none_or(|h| !seen.contains_key(h.as_slice())))
            .map(|h| h.map(Into::into))
            .collect();
        let candidates = candidates.ok_or(Stop::Overflow)?;
        let next_radius = self.radius + 1;
        let mut next = Vec::new();
        for h in candidates {
            if !self.seen.contains_key(&h) {
                self.seen.insert(h.clone(), next_radius);
                next.push(h);
                if self.seen.len() > self.limit {
                    return Err(Stop::Limit {
                        states: self.seen.len(),
                    });
                }
            }
        }
        self.frontier = next;
        self.radius = next_radius;
        self.sizes.push(self.seen.len());
        Ok(())
    }
}

enum Store {
    Small(FxHashMap<Box<[i64]>, u32>),
    Big(FxHashMap<Box<[BigInt]>, u32>),
}

/// An enumerated ball `B(n)` with the word length of each element.
pub struct Ball {
    group: Group,
    gens: GeneratingSet,
    radius: u32,
    store: Store,
    sizes: Vec<usize>,
}

impl std::fmt::Debug for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ball({}, radius {}, {} elements)", self.group, self.radius, self.len())
    }
}

fn resource(limit: usize, radius: u32, states: usize) -> Error {
    Error::Resource {
        limit,
        radius,
        states,
        hint: INFEASIBLE_HINT.into(),
    }
}

fn grow<T: Scalar>(
    layout: &Layout,
    gens: Vec<Vec<T>>,
    n: u32,
    limit: usize,
) -> std::result::Result<Bfs<'_, T>, (Stop, u32)> {
    let mut bfs = Bfs::new(layout, gens, limit);
    while bfs.radius < n {
        let r = bfs.radius + 1;
        bfs.step().map_err(|e| (e, r))?;
    }
    Ok(bfs)
}

/// Enumerates `B(n)` exactly; fails with a resource error instead of truncating.
pub fn enumerate_ball(group: &Group, gens: &GeneratingSet, n: u32, limit: usize) -> Result<Ball> {
    if gens.group() != group {
        return Err(Error::MixedGroups);
    }
    let layout = group.layout();
    if let Some(small) = gens.symmetric_scalars::<i64>() {
        match grow(layout, small, n, limit) {
            Ok(bfs) => {
                return Ok(Ball {
                    group: group.clone(),
                    gens: gens.clone(),
                    radius: n,
                    store: Store::Small(bfs.seen),
                    sizes: bfs.sizes,
                })
            }
            Err((Stop::Limit { states }, r)) => return Err(resource(limit, r, states)),
            Err((Stop::Overflow, _)) => {}
        }
    }
    let big = gens.symmetric_scalars::<BigInt>().expect("BigInt conversion is total");
    match grow(layout, big, n, limit) {
        Ok(bfs) => Ok(Ball {
            group: group.clone(),
            gens: gens.clone(),
            radius: n,
            store: Store::Big(bfs.seen),
            sizes: bfs.sizes,
        }),
        Err((Stop::Limit { states }, r)) => Err(resource(limit, r, states)),
        Err((Stop::Overflow, _)) => unreachable!("BigInt arithmetic does not overflow"),
    }
}

impl Ball {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Small(m) => m.len(),
            Store::Big(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|B(r)|` for `r ≤ radius`.
    pub fn size_at(&self, r: u32) -> usize {
        self.sizes[r.min(self.radius) as usize]
    }

    pub fn length_of_coords(&self, coords: &[BigInt]) -> Option<u32> {
        match &self.store {
            Store::Small(m) => {
                let key: Option<Vec<i64>> = coords.iter().map(i64::from_big).collect();
                m.get(key?.as_slice()).copied()
            }
            Store::Big(m) => m.get(coords).copied(),
        }
    }

    pub fn length_of(&self, g: &Element) -> Option<u32> {
        if g.group() != &self.group {
            return None;
        }
        self.length_of_coords(g.coords())
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.length_of(g).is_some()
    }

    /// All `(coordinate vector, length)` pairs in an unspecified order.
    pub fn entries(&self) -> Vec<(Vec<BigInt>, u32)> {
        match &self.store {
            Store::Small(m) => m
                .iter()
                .map(|(k, &l)| (k.iter().map(|&x| BigInt::from(x)).collect(), l))
                .collect(),
            Store::Big(m) => m.iter().map(|(k, &l)| (k.to_vec(), l)).collect(),
        }
    }

    /// Entries sorted by length, then coordinate vector.
    pub fn sorted_entries(&self) -> Vec<(Vec<BigInt>, u32)> {
        let mut rows = self.entries();
        rows.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        rows
    }

    pub fn elements(&self) -> Vec<Element> {
        self.sorted_entries()
            .into_iter()
            .map(|(c, _)| self.group.from_coords(c).expect("ball keys have the group dimension"))
            .collect()
    }

    /// Machine-integer view of the keys, when the ball was enumerated on the fast path.
    pub(crate) fn small_keys(&self) -> Option<Vec<(&[i64], u32)>> {
        match &self.store {
            Store::Small(m) => Some(m.iter().map(|(k, &l)| (&**k, l)).collect()),
            Store::Big(_) => None,
        }
    }
}

/// `|B(n)|` for `n = 1..=n_max`. Hitting the state limit ends the series early
/// and records a cutoff instead of failing.
pub fn word_growth_series(
    group: &Group,
    gens: &GeneratingSet,
    n_max: u32,
    limit: usize,
) -> Result<GrowthSeries> {
    if gens.group() != group {
        return Err(Error::MixedGroups);
    }
    fn run<T: Scalar>(
        layout: &Layout,
        gens: Vec<Vec<T>>,
        n_max: u32,
        limit: usize,
        series: &mut GrowthSeries,
    ) -> std::result::Result<(), Stop> {
        let mut bfs = Bfs::new(layout, gens, limit);
        while bfs.radius < n_max {
            match bfs.step() {
                Ok(()) => series
                    .push(bfs.radius as u64, BigInt::from(bfs.seen.len()))
                    .expect("radii increase"),
                Err(Stop::Limit { states }) => {
                    series.cutoff = Some(Cutoff {
                        at: bfs.radius as u64 + 1,
                        reason: format!(
                            "state limit {limit} exceeded ({states} states){INFEASIBLE_HINT}"
                        ),
                    });
                    return Ok(());
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
    let label = format!("word growth of {group}");
    let mut series = GrowthSeries::empty(&label, "word_growth_series");
    if let Some(small) = gens.symmetric_scalars::<i64>() {
        if run(group.layout(), small, n_max, limit, &mut series).is_ok() {
            return Ok(series);
        }
        series = GrowthSeries::empty(&label, "word_growth_series");
    }
    let big = gens.symmetric_scalars::<BigInt>().expect("total");
    if run(group.layout(), big, n_max, limit, &mut series).is_err() {
        unreachable!("BigInt arithmetic does not overflow");
    }
    Ok(series)
}

/// Checks that every default generator has word length at most `radius`
/// with respect to `gens`.
pub fn verify_generating(gens: &GeneratingSet, radius: u32, limit: usize) -> Result<()> {
    let group = gens.group();
    let ball = enumerate_ball(group, gens, radius, limit)?;
    let defaults = group.default_gens();
    for (name, g) in defaults.names().iter().zip(defaults.elements()) {
        if !ball.contains(g) {
            return Err(Error::NotGenerating(format!(
                "default generator {name} is not reached within radius {radius}"
            )));
        }
    }
    Ok(())
}

/// Per-coordinate bounds `β_c(n)` with `|g_c| ≤ β_c(n)` for every `g ∈ B(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVector {
    pub radius: u64,
    pub bounds: Vec<BigInt>,
}

/// Interval propagation of the product formula: with `γ` the entrywise max
/// absolute value over generators and inverses,
/// `β(m+1)_ij = β(m)_ij + γ_ij + Σ_k β(m)_ik γ_kj`.
pub struct BoundPropagator<'a> {
    layout: &'a Layout,
    step_size: Vec<BigInt>,
    current: BoundVector,
}

impl<'a> BoundPropagator<'a> {
    pub fn new(group: &'a Group, gens: &GeneratingSet) -> Self {
        let dim = group.dim();
        let mut step_size = vec![BigInt::zero(); dim];
        for s in gens.symmetric() {
            for (t, c) in s.coords().iter().enumerate() {
                let a = c.abs();
                if a > step_size[t] {
                    step_size[t] = a;
                }
            }
        }
        BoundPropagator {
            layout: group.layout(),
            step_size,
            current: BoundVector {
                radius: 0,
                bounds: vec![BigInt::zero(); dim],
            },
        }
    }

    pub fn current(&self) -> &BoundVector {
        &self.current
    }

    pub fn advance(&mut self) -> &BoundVector {
        let old = &self.current.bounds;
        let new: Vec<BigInt> = (0..old.len())
            .map(|t| {
                let mut acc = &old[t] + &self.step_size[t];
                for &(a, b) in self.layout.terms(t) {
                    acc += &old[a as usize] * &self.step_size[b as usize];
                }
                acc
            })
            .collect();
        self.current = BoundVector {
            radius: self.current.radius + 1,
            bounds: new,
        };
        &self.current
    }
}

pub fn coordinate_bounds(group: &Group, gens: &GeneratingSet, n: u64) -> BoundVector {
    let mut p = BoundPropagator::new(group, gens);
    for _ in 0..n {
        p.advance();
    }
    p.current().clone()
}

/// `β(0), β(1), …, β(n_max)`.
pub fn coordinate_bounds_table(group: &Group, gens: &GeneratingSet, n_max: u64) -> Vec<BoundVector> {
    let mut p = BoundPropagator::new(group, gens);
    let mut out = vec![p.current().clone()];
    for _ in 0..n_max {
        out.push(p.advance().clone());
    }
    out
}

/// Word lengths `‖z^m‖` of powers of a central element.
#[derive(Debug, Clone)]
pub struct DistortionReport {
    /// `ν(z)`; theory predicts `‖z^m‖ ≍ m^{1/weight}`.
    pub weight: usize,
    pub series: GrowthSeries,
    /// Log-log fit over the largest decade of available `m`.
    pub fit: Option<ExponentFit>,
    pub radius_reached: u32,
}

/// Grows a ball until every `z^m`, `1 ≤ m ≤ m_max`, has been reached or
/// `radius_cap` is hit, then reads off the word lengths.
pub fn distortion_series(
    group: &Group,
    gens: &GeneratingSet,
    z: &Element,
    m_max: u64,
    radius_cap: u32,
    limit: usize,
) -> Result<DistortionReport> {
    if gens.group() != group || z.group() != group {
        return Err(Error::MixedGroups);
    }
    if z.is_identity() {
        return Err(Error::Invalid("distortion needs a nontrivial element".into()));
    }
    if !center(group)?.contains(z) {
        return Err(Error::Invalid(format!("{z} is not central")));
    }
    let weight = element_weight(z)?;
    let powers: Vec<Vec<BigInt>> = (1..=m_max).map(|m| z.pow(m as i64).coord_vector()).collect();

    fn run<T: Scalar>(
        layout: &Layout,
        gens: Vec<Vec<T>>,
        powers: &[Vec<BigInt>],
        radius_cap: u32,
        limit: usize,
    ) -> std::result::Result<Reached, Stop> {
        let mut targets: HashMap<Vec<T>, usize> = HashMap::new();
        for (m, p) in powers.iter().enumerate() {
            if let Some(v) = p.iter().map(T::from_big).collect::<Option<Vec<T>>>() {
                targets.insert(v, m);
            }
        }
        let mut found = vec![None; powers.len()];
        let mut remaining = powers.len();
        let mut bfs = Bfs::new(layout, gens, limit);
        let mut note = None;
        while remaining > 0 && bfs.radius < radius_cap {
            match bfs.step() {
                Ok(()) => {}
                Err(Stop::Limit { states }) => {
                    note = Some(format!(
                        "state limit {limit} exceeded at radius {} ({states} states)",
                        bfs.radius + 1
                    ));
                    break;
                }
                Err(e) => return Err(e),
            }
            for h in &bfs.frontier {
                if let Some(&m) = targets.get(&h[..]) {
                    found[m] = Some(bfs.radius);
                    remaining -= 1;
                }
            }
        }
        Ok((found, bfs.radius, note))
    }

    let layout = group.layout();
    let outcome = match gens.symmetric_scalars::<i64>() {
        Some(small) => match run(layout, small, &powers, radius_cap, limit) {
            Ok(v) => Some(v),
            Err(Stop::Overflow) => None,
            Err(Stop::Limit { .. }) => unreachable!("limit is reported in-band"),
        },
        None => None,
    };
    let (found, radius_reached, note) = match outcome {
        Some(v) => v,
        None => match run(layout, gens.symmetric_scalars::<BigInt>().expect("total"), &powers, radius_cap, limit) {
            Ok(v) => v,
            Err(_) => unreachable!("BigInt arithmetic does not overflow"),
        },
    };

    let mut series = GrowthSeries::empty(&format!("distortion of {z} in {group}"), "distortion_series");
    for (m, len) in found.iter().enumerate() {
        if let Some(l) = len {
            series.push(m as u64 + 1, BigInt::from(*l))?;
        }
    }
    if let Some(first_missing) = found.iter().position(Option::is_none) {
        series.cutoff = Some(Cutoff {
            at: first_missing as u64 + 1,
            reason: note.unwrap_or_else(|| format!("not reached within radius cap {radius_cap}")),
        });
    }
    let fit = series.points().last().and_then(|&(m_hi, _)| {
        let lo = (m_hi as f64 / 10.0).ceil() as u64;
        fit_exponent(&series, Some((lo.max(1), m_hi))).ok()
    });
    Ok(DistortionReport {
        weight,
        series,
        fit,
        radius_reached,
    })
}
