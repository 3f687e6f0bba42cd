//! Exact rational colourful point configurations: origin-in-simplex and
//! origin-in-hull predicates, extraction of the octahedral system of
//! colourful simplices containing the origin, and seeded random
//! experiments on the minimum number of such simplices.
//!
//! Every predicate is decided in exact rational arithmetic; there is no
//! floating point anywhere on these paths.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::shape::{ClassShape, EdgeTuple};
use crate::system::OctahedralSystem;

pub type Rational = BigRational;

/// Coordinate range for randomly sampled integer points.
pub const COORDINATE_BOUND: i64 = 32;

/// Attempts allowed when rejection-sampling a class or a configuration.
pub const SAMPLING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        RationalPoint {
            coords: coords
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        RationalPoint {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        RationalPoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// `d + 1` colour classes of points in d-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourConfig {
    dim: usize,
    classes: Vec<Vec<RationalPoint>>,
}

impl ColourConfig {
    pub fn new(dim: usize, classes: Vec<Vec<RationalPoint>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain(format!("dimension must be positive")));
        }
        if classes.len() != dim + 1 {
            return Err(Error::Domain(format!(
                "need {} colour classes for dimension {dim}, got {}",
                dim + 1,
                classes.len()
            )));
        }
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::Domain(format!("colour class {i} is empty")));
            }
            for p in class {
                if p.dim() != dim {
                    return Err(Error::Domain(format!(
                        "point of dimension {} in class {i} of a {dim}-dimensional configuration",
                        p.dim()
                    )));
                }
            }
        }
        Ok(ColourConfig { dim, classes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[Vec<RationalPoint>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn point(&self, class: usize, index: usize) -> &RationalPoint {
        &self.classes[class][index]
    }
}

/// Where the origin sits relative to the simplex spanned by `d+1` points
/// in d-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexLocation {
    Inside,
    Boundary,
    Outside,
}

/// Solves `Σ λ_i p_i = 0, Σ λ_i = 1` exactly and classifies by the signs
/// of the barycentric coordinates. Affine dependence is an error.
pub fn origin_in_simplex(points: &[RationalPoint]) -> Result<SimplexLocation> {
    let d = points
        .first()
        .ok_or_else(|| Error::Domain(format!("no points")))?
        .dim();
    if points.len() != d + 1 || points.iter().any(|p| p.dim() != d) {
        return Err(Error::Domain(format!(
            "need exactly d+1 points of dimension d"
        )));
    }
    // Rows: d coordinate equations plus the affine one.
    let mut matrix: Vec<Vec<Rational>> = (0..d + 1)
        .map(|row| {
            points
                .iter()
                .map(|p| {
                    if row < d {
                        p.coords[row].clone()
                    } else {
                        BigRational::from(BigInt::from(1))
                    }
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<Rational> = (0..d + 1)
        .map(|row| {
            if row < d {
                BigRational::zero()
            } else {
                BigRational::from(BigInt::from(1))
            }
        })
        .collect();

    let lambda = match solve_square(&mut matrix, &mut rhs) {
        Some(solution) => solution,
        None => {
            return Err(Error::NotGeneralPosition(format!(
                "affinely dependent colourful selection"
            )))
        }
    };
    if lambda.iter().any(|l| l.is_negative()) {
        Ok(SimplexLocation::Outside)
    } else if lambda.iter().any(Zero::is_zero) {
        Ok(SimplexLocation::Boundary)
    } else {
        Ok(SimplexLocation::Inside)
    }
}

/// In-place Gaussian elimination; `None` when the matrix is singular.
fn solve_square(matrix: &mut [Vec<Rational>], rhs: &mut [Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero())?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !matrix[r][col].is_zero() {
                let factor = &matrix[r][col] / &matrix[col][col];
                for c in col..n {
                    let delta = &factor * &matrix[col][c];
                    matrix[r][c] -= delta;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(
        (0..n)
            .map(|r| &rhs[r] / &matrix[r][r])
            .collect(),
    )
}

/// Exact closed-hull membership of the origin, by scanning affinely
/// independent subsets of at most `d + 1` points.
pub fn origin_in_hull(points: &[RationalPoint], d: usize) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::Domain(format!("empty class")));
    }
    if points.iter().any(|p| p.dim() != d) {
        return Err(Error::Domain(format!("point dimension mismatch")));
    }
    let n = points.len();
    let max_size = (d + 1).min(n);
    let mut subset: Vec<usize> = Vec::new();
    fn scan(
        points: &[RationalPoint],
        d: usize,
        start: usize,
        remaining: usize,
        subset: &mut Vec<usize>,
    ) -> bool {
        if !subset.is_empty() && origin_in_affine_hull_nonneg(points, d, subset) {
            return true;
        }
        if remaining == 0 {
            return false;
        }
        for i in start..points.len() {
            subset.push(i);
            if scan(points, d, i + 1, remaining - 1, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    Ok(scan(points, d, 0, max_size, &mut subset))
}

/// Whether the origin is a non-negative affine combination of the chosen
/// affinely independent points; dependent subsets report false (a smaller
/// independent subset witnesses membership when it holds).
fn origin_in_affine_hull_nonneg(points: &[RationalPoint], d: usize, subset: &[usize]) -> bool {
    let s = subset.len();
    // Augmented (d+1) x (s+1) system.
    let rows = d + 1;
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|row| {
            let mut r: Vec<Rational> = subset
                .iter()
                .map(|&i| {
                    if row < d {
                        points[i].coords[row].clone()
                    } else {
                        BigRational::from(BigInt::from(1))
                    }
                })
                .collect();
            r.push(if row < d {
                BigRational::zero()
            } else {
                BigRational::from(BigInt::from(1))
            });
            r
        })
        .collect();

    // Forward elimination over the s unknown columns.
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..s {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            // Affinely dependent subset.
            return false;
        };
        m.swap(row, p);
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[row][col];
                for c in col..=s {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Consistency: no row with zero coefficients and nonzero rhs.
    for r in row..rows {
        if !m[r][s].is_zero() {
            return false;
        }
    }
    // Unique solution; non-negativity decides.
    (0..s).all(|col| {
        let lambda = &m[pivot_rows[col]][s] / &m[pivot_rows[col]][col];
        !lambda.is_negative()
    })
}

/// The octahedral system of colourful simplices strictly containing the
/// origin, with its count. Any boundary contact or affine degeneracy is
/// a general-position error naming the offending selection.
pub fn depth_system(cfg: &ColourConfig) -> Result<(OctahedralSystem, u64)> {
    let sizes = cfg.class_sizes();
    let shape = ClassShape::new(sizes.clone())?;
    shape.require_all_at_least_two()?;
    let n = cfg.dim + 1;
    let mut edges: Vec<EdgeTuple> = Vec::new();
    let mut choice = alloc::vec![0usize; n];
    loop {
        let points: Vec<RationalPoint> = (0..n)
            .map(|c| cfg.classes[c][choice[c]].clone())
            .collect();
        match origin_in_simplex(&points) {
            Ok(SimplexLocation::Inside) => edges.push(EdgeTuple::new(choice.clone())),
            Ok(SimplexLocation::Outside) => {}
            Ok(SimplexLocation::Boundary) => {
                return Err(Error::NotGeneralPosition(format!(
                    "origin on the boundary of colourful selection {choice:?}"
                )))
            }
            Err(Error::NotGeneralPosition(_)) => {
                return Err(Error::NotGeneralPosition(format!(
                    "degenerate colourful selection {choice:?}"
                )))
            }
            Err(e) => return Err(e),
        }
        let mut c = n;
        loop {
            if c == 0 {
                let count = edges.len() as u64;
                return Ok((OctahedralSystem::new(shape, edges)?, count));
            }
            c -= 1;
            choice[c] += 1;
            if choice[c] < sizes[c] {
                break;
            }
            choice[c] = 0;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> RationalPoint {
    loop {
        let coords: Vec<i64> = (0..d)
            .map(|_| rng.gen_range(-COORDINATE_BOUND..=COORDINATE_BOUND))
            .collect();
        if coords.iter().any(|&c| c != 0) {
            return RationalPoint::from_integers(&coords);
        }
    }
}

/// Deterministic rejection sampler. Classes are redrawn until they hold
/// the origin in their hulls (when required), then the whole
/// configuration is redrawn until it is in general position.
pub fn sample_config(
    d: usize,
    sizes: &[usize],
    seed: u64,
    require_hulls: bool,
) -> Result<ColourConfig> {
    if sizes.len() != d + 1 {
        return Err(Error::Domain(format!(
            "need {} class sizes for dimension {d}",
            d + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLING_ATTEMPTS {
        let mut classes: Vec<Vec<RationalPoint>> = Vec::with_capacity(d + 1);
        for &size in sizes {
            let mut attempts = 0;
            let class = loop {
                attempts += 1;
                if attempts > SAMPLING_ATTEMPTS {
                    return Err(Error::SamplingBudget(format!(
                        "no class of {size} points held the origin in its hull"
                    )));
                }
                let class: Vec<RationalPoint> =
                    (0..size).map(|_| random_point(&mut rng, d)).collect();
                if !require_hulls || origin_in_hull(&class, d)? {
                    break class;
                }
            };
            classes.push(class);
        }
        let cfg = ColourConfig::new(d, classes)?;
        match depth_system(&cfg) {
            Ok(_) => return Ok(cfg),
            Err(Error::NotGeneralPosition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingBudget(format!(
        "no configuration in general position found"
    )))
}

/// Hull-constrained random configuration: every class holds the origin.
pub fn random_config(d: usize, sizes: &[usize], seed: u64) -> Result<ColourConfig> {
    sample_config(d, sizes, seed, true)
}

#[derive(Debug, Clone)]
pub struct MuSearchOutcome {
    pub d: usize,
    pub trials: u64,
    pub min_count: u64,
    pub witness: ColourConfig,
}

/// Random descent on the number of origin-covering colourful simplices:
/// single-point resamples are accepted when the count drops, with a full
/// restart after a long stretch without improvement. Reports the best
/// count seen; makes no optimality claim.
pub fn mu_search(d: usize, trials: u64, seed: u64) -> Result<MuSearchOutcome> {
    let sizes = alloc::vec![d + 1; d + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d75_7365_6172_6368);
    let mut config = random_config(d, &sizes, seed)?;
    let (_, mut count) = depth_system(&config)?;
    let mut best_config = config.clone();
    let mut best_count = count;
    let mut stale = 0u64;
    let mut restart_seed = seed;

    for _ in 0..trials {
        if stale >= 1500 {
            restart_seed = restart_seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
            config = random_config(d, &sizes, restart_seed)?;
            count = depth_system(&config)?.1;
            if count < best_count {
                best_count = count;
                best_config = config.clone();
            }
            stale = 0;
            continue;
        }
        let class = rng.gen_range(0..d + 1);
        let index = rng.gen_range(0..sizes[class]);
        let replacement = random_point(&mut rng, d);
        let mut candidate_classes = config.classes().to_vec();
        candidate_classes[class][index] = replacement;
        let candidate = ColourConfig::new(d, candidate_classes)?;
        if !origin_in_hull(&candidate.classes()[class], d)? {
            stale += 1;
            continue;
        }
        match depth_system(&candidate) {
            Ok((_, c)) if c < count => {
                config = candidate;
                count = c;
                stale = 0;
                if count < best_count {
                    best_count = count;
                    best_config = config.clone();
                }
            }
            Ok(_) => stale += 1,
            Err(Error::NotGeneralPosition(_)) => stale += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(MuSearchOutcome {
        d,
        trials,
        min_count: best_count,
        witness: best_config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(coords)
    }

    #[test]
    fn simplex_classification_examples() {
        let inside = origin_in_simplex(&[pt(&[1, 0]), pt(&[-1, 1]), pt(&[-1, -1])]).unwrap();
        assert_eq!(inside, SimplexLocation::Inside);

        let outside = origin_in_simplex(&[pt(&[1, 0]), pt(&[2, 1]), pt(&[1, 1])]).unwrap();
        assert_eq!(outside, SimplexLocation::Outside);

        let collinear = origin_in_simplex(&[pt(&[1, 0]), pt(&[2, 0]), pt(&[3, 0])]);
        assert!(matches!(collinear, Err(Error::NotGeneralPosition(_))));

        let boundary = origin_in_simplex(&[pt(&[1, 0]), pt(&[-1, 0]), pt(&[0, 1])]).unwrap();
        assert_eq!(boundary, SimplexLocation::Boundary);
    }

    #[test]
    fn simplex_classification_is_scale_invariant() {
        let points = [pt(&[3, 1]), pt(&[-2, 2]), pt(&[-1, -4])];
        let base = origin_in_simplex(&points).unwrap();
        for num in [1i64, 3, 7] {
            for den in [2i64, 5] {
                let factor = BigRational::new(BigInt::from(num), BigInt::from(den));
                for which in 0..3 {
                    let mut scaled = points.to_vec();
                    scaled[which] = scaled[which].scaled(&factor);
                    assert_eq!(origin_in_simplex(&scaled).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn hull_membership_examples() {
        assert!(origin_in_hull(&[pt(&[1, 0]), pt(&[-1, 1]), pt(&[-1, -1])], 2).unwrap());
        assert!(!origin_in_hull(&[pt(&[1, 0]), pt(&[2, 1])], 2).unwrap());
        assert!(origin_in_hull(&[pt(&[-1]), pt(&[2])], 1).unwrap());
        // Boundary counts as inside for the closed hull.
        assert!(origin_in_hull(&[pt(&[1, 0]), pt(&[-1, 0])], 2).unwrap());
        assert!(origin_in_hull(&[pt(&[0, 0])], 2).unwrap());
    }

    #[test]
    fn one_dimensional_depth_example() {
        let cfg = ColourConfig::new(
            1,
            vec![vec![pt(&[-1]), pt(&[2])], vec![pt(&[1]), pt(&[-3])]],
        )
        .unwrap();
        let (sys, count) = depth_system(&cfg).unwrap();
        assert_eq!(count, 2);
        let expect = vec![EdgeTuple::new(vec![0, 0]), EdgeTuple::new(vec![1, 1])];
        assert_eq!(sys.edges(), expect.as_slice());
        assert_eq!(sys.is_octahedral(), Ok(true));
    }

    #[test]
    fn boundary_contact_is_rejected() {
        let cfg = ColourConfig::new(
            1,
            vec![vec![pt(&[-1]), pt(&[1])], vec![pt(&[0]), pt(&[2])]],
        );
        // A class containing the origin itself trips the boundary case.
        let cfg = cfg.unwrap();
        assert!(matches!(
            depth_system(&cfg),
            Err(Error::NotGeneralPosition(_))
        ));
    }

    #[test]
    fn random_configs_are_deterministic_and_valid() {
        let a = random_config(2, &[3, 3, 3], 1).unwrap();
        let b = random_config(2, &[3, 3, 3], 1).unwrap();
        assert_eq!(a, b);
        for class in a.classes() {
            assert!(origin_in_hull(class, 2).unwrap());
        }
        let (sys, count) = depth_system(&a).unwrap();
        assert_eq!(sys.is_octahedral(), Ok(true));
        assert!(sys.isolated_vertices().is_empty());
        assert!(count >= 5, "planar depth is at least five, got {count}");
    }

    #[test]
    fn octahedron_parity_holds_without_hull_conditions() {
        for seed in 0..20 {
            let cfg = sample_config(2, &[3, 3, 3], seed, false).unwrap();
            let (sys, _) = depth_system(&cfg).unwrap();
            assert_eq!(sys.is_octahedral(), Ok(true));
        }
    }

    #[test]
    fn one_dimensional_minimum_is_two() {
        let outcome = mu_search(1, 50, 3).unwrap();
        assert_eq!(outcome.min_count, 2);
    }
}
