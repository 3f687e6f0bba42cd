//! Published bound formulas for the minimum edge count of an octahedral
//! system without isolated vertex, evaluated exactly in integers.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::shape::ClassShape;

/// Which formula produced a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerBoundBy {
    /// Non-trivial systems have at least `min_i m_i` edges.
    MinClassSize,
    /// Without isolated vertex: at least `max_{i<j}(m_i + m_j) - 2`.
    TwoLargestClasses,
    /// Equal sizes `m` with `4 <= m <= n`: `m²/2 + 5m/2 - 11`.
    EqualShapeQuadratic,
    /// Equal sizes `m` with `4 <= n <= m`: `nm - n²/2 + 5n/2 - 11`.
    ManyClassesQuadratic,
}

impl LowerBoundBy {
    pub fn as_str(self) -> &'static str {
        match self {
            LowerBoundBy::MinClassSize => "min-class-size",
            LowerBoundBy::TwoLargestClasses => "two-largest-classes",
            LowerBoundBy::EqualShapeQuadratic => "equal-shape-quadratic",
            LowerBoundBy::ManyClassesQuadratic => "many-classes-quadratic",
        }
    }
}

/// Which construction produced an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBoundBy {
    /// The inductive chain family: `2 + Σ(m_i - 2)`.
    ChainConstruction,
    /// The grid family on equal sizes: `m²`.
    GridConstruction,
}

impl UpperBoundBy {
    pub fn as_str(self) -> &'static str {
        match self {
            UpperBoundBy::ChainConstruction => "chain-construction",
            UpperBoundBy::GridConstruction => "grid-construction",
        }
    }
}

/// Best published lower and upper bounds for a shape, with provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub shape: ClassShape,
    pub lower: u64,
    pub lower_by: LowerBoundBy,
    pub upper: u64,
    pub upper_by: UpperBoundBy,
}

/// Maximum over the applicable published lower bounds.
pub fn published_lower_bound(shape: &ClassShape) -> Result<(u64, LowerBoundBy)> {
    shape.require_all_at_least_two()?;
    let sizes = shape.sizes();
    let n = sizes.len() as i128;

    let mut candidates: Vec<(i128, LowerBoundBy)> = Vec::new();

    let min_size = *sizes.iter().min().expect("non-empty") as i128;
    candidates.push((min_size, LowerBoundBy::MinClassSize));

    if sizes.len() >= 2 {
        let mut sorted: Vec<usize> = sizes.to_vec();
        sorted.sort_unstable();
        let two_largest =
            sorted[sorted.len() - 1] as i128 + sorted[sorted.len() - 2] as i128 - 2;
        candidates.push((two_largest, LowerBoundBy::TwoLargestClasses));
    }

    let all_equal = sizes.iter().all(|&m| m == sizes[0]);
    if all_equal {
        let m = sizes[0] as i128;
        // Numerators below are always even for integer m and n, so the
        // halves are exact; floor-division keeps the bound conservative
        // regardless.
        if 4 <= m && m <= n {
            let v = (m * m + 5 * m).div_euclid(2) - 11;
            candidates.push((v, LowerBoundBy::EqualShapeQuadratic));
        }
        if 4 <= n && n <= m {
            let v = n * m - (n * n - 5 * n).div_euclid(2) - 11;
            candidates.push((v, LowerBoundBy::ManyClassesQuadratic));
        }
    }

    let mut best = candidates[0];
    for c in candidates.into_iter().skip(1) {
        if c.0 > best.0 {
            best = c;
        }
    }
    // Lower bounds cannot drop below the coverage minimum of 1.
    let value = best.0.max(1) as u64;
    Ok((value, best.1))
}

/// Minimum over the applicable construction sizes.
pub fn construction_upper_bound(shape: &ClassShape) -> Result<(u64, UpperBoundBy)> {
    shape.require_all_at_least_two()?;
    let sizes = shape.sizes();
    let chain: u64 = 2 + sizes.iter().map(|&m| m as u64 - 2).sum::<u64>();
    let mut best = (chain, UpperBoundBy::ChainConstruction);
    let all_equal = sizes.iter().all(|&m| m == sizes[0]);
    if all_equal && sizes.len() >= 2 {
        let grid = (sizes[0] as u64) * (sizes[0] as u64);
        if grid < best.0 {
            best = (grid, UpperBoundBy::GridConstruction);
        }
    }
    Ok(best)
}

pub fn bound_report(shape: &ClassShape) -> Result<BoundReport> {
    let (lower, lower_by) = published_lower_bound(shape)?;
    let (upper, upper_by) = construction_upper_bound(shape)?;
    debug_assert!(lower <= upper, "bounds crossed on {shape:?}");
    Ok(BoundReport {
        shape: shape.clone(),
        lower,
        lower_by,
        upper,
        upper_by,
    })
}

/// The three-case quadratic lower bound for a system whose first `k`
/// classes have sizes `k-1` (`z` of them) or `k`, given the sizes of the
/// last two classes. Halves are exact for integer arguments; floor
/// division keeps them conservative otherwise.
pub fn kzn_bound(k: u64, z: u64, n: u64, v_nm1: u64, v_n: u64) -> Result<i64> {
    if !(2 <= k && k <= n && z < k) {
        return Err(Error::Domain(format!(
            "need 2 <= k <= n and 0 <= z < k, got k={k}, z={z}, n={n}"
        )));
    }
    let (k, z, n) = (k as i128, z as i128, n as i128);
    let (v_nm1, v_n) = (v_nm1 as i128, v_n as i128);
    let value = if k <= n - 2 {
        (k * k + k).div_euclid(2) - 8 + v_nm1 + v_n - z
    } else if k == n - 1 {
        (n * n + n).div_euclid(2) - 10 + v_n - z
    } else {
        (n * n + 5 * n).div_euclid(2) - 11 - z
    };
    Ok(value as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lower_bound_examples() {
        let shape = ClassShape::new(vec![5, 5, 5, 5, 5]).unwrap();
        assert_eq!(
            published_lower_bound(&shape).unwrap(),
            (14, LowerBoundBy::EqualShapeQuadratic)
        );

        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        assert_eq!(
            published_lower_bound(&shape).unwrap(),
            (4, LowerBoundBy::TwoLargestClasses)
        );

        let shape = ClassShape::new(vec![2, 2, 7, 9]).unwrap();
        assert_eq!(
            published_lower_bound(&shape).unwrap(),
            (14, LowerBoundBy::TwoLargestClasses)
        );
    }

    #[test]
    fn quadratic_variants_respect_their_side_conditions() {
        // Six classes of size four: only the m <= n form applies,
        // (16 + 20)/2 - 11 = 7.
        let shape = ClassShape::new(vec![4, 4, 4, 4, 4, 4]).unwrap();
        let (v, by) = published_lower_bound(&shape).unwrap();
        assert_eq!((v, by), (7, LowerBoundBy::EqualShapeQuadratic));
        // Four classes of size five: only the n <= m form applies,
        // 20 - 8 + 10 - 11 = 11.
        let shape = ClassShape::new(vec![5, 5, 5, 5]).unwrap();
        let (v, by) = published_lower_bound(&shape).unwrap();
        assert_eq!((v, by), (11, LowerBoundBy::ManyClassesQuadratic));
    }

    #[test]
    fn upper_bound_picks_the_smaller_construction() {
        let shape = ClassShape::new(vec![3, 3, 3]).unwrap();
        assert_eq!(
            construction_upper_bound(&shape).unwrap(),
            (5, UpperBoundBy::ChainConstruction)
        );
        // Nine classes of size 3: chain gives 11, grid gives 9.
        let shape = ClassShape::new(vec![3; 9]).unwrap();
        assert_eq!(
            construction_upper_bound(&shape).unwrap(),
            (9, UpperBoundBy::GridConstruction)
        );
    }

    #[test]
    fn kzn_examples() {
        assert_eq!(kzn_bound(5, 0, 5, 5, 5).unwrap(), 14);
        assert_eq!(kzn_bound(4, 0, 6, 4, 4).unwrap(), 10);
        assert_eq!(kzn_bound(4, 1, 6, 4, 4).unwrap(), 9);
        // k = n - 1 case: (25 + 5)/2 - 10 + 4 - 0 = 9.
        assert_eq!(kzn_bound(4, 0, 5, 4, 4).unwrap(), 9);
        assert!(kzn_bound(1, 0, 5, 4, 4).is_err());
        assert!(kzn_bound(3, 3, 5, 4, 4).is_err());
        assert!(kzn_bound(6, 0, 5, 4, 4).is_err());
    }
}
