//! Lattice classes in the Bruhat-Tits building of PGL_d over an exact valued
//! field: canonical forms, containment, adjacency, intersections and finite
//! convex hulls.
//!
//! A homothety class is represented by its canonical matrix: the column
//! Hermite form rescaled so the minimal entry valuation is 0. Convex hulls
//! are computed by a box enumeration seeded from invariant-factor spreads,
//! then closed under generator intersections until a fixpoint; the fixpoint
//! both completes and certifies the hull.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::linalg::column_hermite;
use crate::matrix::Matrix;
use crate::scalar::ScalarError;
use crate::valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildingError {
    BackendMismatch,
    SingularMatrix,
    EmptyFamily,
    Scalar(ScalarError),
}

impl fmt::Display for BuildingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildingError::BackendMismatch => write!(f, "lattices from different valued fields"),
            BuildingError::SingularMatrix => {
                write!(f, "generator matrix is singular over the fraction field")
            }
            BuildingError::EmptyFamily => write!(f, "empty lattice family"),
            BuildingError::Scalar(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BuildingError {}

impl From<ScalarError> for BuildingError {
    fn from(e: ScalarError) -> BuildingError {
        match e {
            ScalarError::SingularMatrix => BuildingError::SingularMatrix,
            ScalarError::BackendMismatch => BuildingError::BackendMismatch,
            other => BuildingError::Scalar(other),
        }
    }
}

/// A homothety class of lattices, held by its canonical matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeClass {
    canonical: Matrix,
}

impl LatticeClass {
    /// Canonicalizes a generator matrix: Hermite form, then a homothety
    /// rescale so the minimal entry valuation is 0.
    pub fn new(m: &Matrix) -> Result<LatticeClass, BuildingError> {
        if !m.is_square() {
            return Err(BuildingError::SingularMatrix);
        }
        let h = column_hermite(m)?;
        let s = h.min_valuation().expect_finite();
        let canonical = h.scale_uniformizer(-s);
        debug_assert_eq!(column_hermite(&canonical).unwrap(), canonical);
        debug_assert_eq!(canonical.min_valuation(), Valuation::Finite(0));
        Ok(LatticeClass { canonical })
    }

    pub fn standard(backend: crate::scalar::Backend, d: usize) -> LatticeClass {
        LatticeClass {
            canonical: Matrix::identity(backend, d),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.canonical
    }

    pub fn dim(&self) -> usize {
        self.canonical.rows()
    }

    pub fn backend(&self) -> crate::scalar::Backend {
        self.canonical.backend()
    }

    fn compatible(&self, other: &LatticeClass) -> Result<(), BuildingError> {
        if self.backend() != other.backend() {
            return Err(BuildingError::BackendMismatch);
        }
        if self.dim() != other.dim() {
            return Err(BuildingError::BackendMismatch);
        }
        Ok(())
    }
}

impl PartialOrd for LatticeClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.canonical_cmp(&other.canonical)
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical)
    }
}

/// Whether the lattice of `m2` is contained in the lattice of `m1`:
/// all entries of m1^-1 m2 have nonnegative valuation.
pub fn contains(m1: &Matrix, m2: &Matrix) -> Result<bool, BuildingError> {
    if m1.backend() != m2.backend() || m1.rows() != m2.rows() {
        return Err(BuildingError::BackendMismatch);
    }
    let t = m1.inverse()?.mul(m2)?;
    Ok(t.is_integral())
}

/// Adjacency in the building: distinct classes admitting representatives
/// with pi Lambda_1 in Lambda_2 in Lambda_1. The shift is normalized via the
/// maximal m with Lambda_2 in pi^m Lambda_1.
pub fn adjacent(l1: &LatticeClass, l2: &LatticeClass) -> Result<bool, BuildingError> {
    l1.compatible(l2)?;
    if l1 == l2 {
        return Ok(false);
    }
    let t = l1.matrix().inverse()?.mul(l2.matrix())?;
    let m_star = t.min_valuation().expect_finite();
    let t_inv = t.inverse()?;
    let lower = t_inv.min_valuation().expect_finite();
    Ok(lower >= -(m_star + 1))
}

/// Generator matrix of the intersection of two lattices, by the dual-sum
/// identity: the dual of M O^d is M^(-T) O^d, and the dual of a sum is the
/// intersection of duals.
pub fn intersect(m1: &Matrix, m2: &Matrix) -> Result<Matrix, BuildingError> {
    if m1.backend() != m2.backend() || m1.rows() != m2.rows() {
        return Err(BuildingError::BackendMismatch);
    }
    let d1 = m1.inverse()?.transpose();
    let d2 = m2.inverse()?.transpose();
    let sum = column_hermite(&d1.hcat(&d2)?)?;
    let result = sum.inverse()?.transpose();
    debug_assert!(contains(m1, &result).unwrap() && contains(m2, &result).unwrap());
    Ok(result)
}

/// The convex hull of a finite set of lattice classes, with its vertex set
/// sorted lexicographically on canonical matrices.
#[derive(Debug, Clone)]
pub struct ConvexHull {
    pub generators: Vec<LatticeClass>,
    pub vertices: Vec<LatticeClass>,
}

impl ConvexHull {
    pub fn contains_class(&self, l: &LatticeClass) -> bool {
        self.vertices.binary_search_by(|v| v.cmp(l)).is_ok()
    }
}

/// Membership in a hull is canonical-form set membership.
pub fn hull_member(l: &LatticeClass, hull: &ConvexHull) -> Result<bool, BuildingError> {
    if let Some(v) = hull.vertices.first() {
        l.compatible(v)?;
    }
    Ok(hull.contains_class(l))
}

/// Cached per-vertex data for the hull computation: the canonical matrix,
/// its inverse, and the dual generator matrix M^(-T).
struct HullVertex {
    inv: Matrix,
    dual: Matrix,
}

impl HullVertex {
    fn new(class: &LatticeClass) -> Result<HullVertex, BuildingError> {
        let inv = class.matrix().inverse()?;
        let dual = inv.transpose();
        Ok(HullVertex { inv, dual })
    }
}

/// Intersection through precomputed duals: the dual of a sum is the
/// intersection of the duals.
fn intersect_duals(dual_a: &Matrix, dual_b: &Matrix) -> Result<Matrix, BuildingError> {
    let sum = column_hermite(&dual_a.hcat(dual_b)?)?;
    Ok(sum.inverse()?.transpose())
}

/// Extreme invariant-factor valuations of a^-1 b from cached inverses: the
/// least is the minimal entry valuation of a^-1 b, the greatest the negated
/// minimal entry valuation of b^-1 a.
fn transition_window(
    a: &LatticeClass,
    a_inv: &Matrix,
    b: &LatticeClass,
    b_inv: &Matrix,
) -> Result<(i64, i64), BuildingError> {
    let forward = a_inv.mul(b.matrix())?;
    let backward = b_inv.mul(a.matrix())?;
    let lo = forward.min_valuation().expect_finite();
    let hi = -backward.min_valuation().expect_finite();
    Ok((lo, hi))
}

/// The convex hull is computed in two stages. A box enumeration over
/// m_1 = 0, |m_i| <= spread seeds the vertex set with the classes
/// [cap pi^(m_i) Lambda_i]. The set is then closed under the operations
/// [pi^m Lambda_g cap Lambda] for every generator g, every member and every
/// integer m; outside the transition window the operation is absorbed by
/// nesting, so only the interior window needs computing. Since every class
/// of the hull is a shifted intersection of generators, and such an
/// intersection is a fold of pairwise generator intersections, the fixpoint
/// is exactly the convex hull: closure under arbitrary pairs follows.
pub fn convex_hull(gamma: &[Matrix]) -> Result<ConvexHull, BuildingError> {
    if gamma.is_empty() {
        return Err(BuildingError::EmptyFamily);
    }
    let generators: Vec<LatticeClass> = gamma
        .iter()
        .map(LatticeClass::new)
        .collect::<Result<_, _>>()?;
    for g in &generators[1..] {
        generators[0].compatible(g)?;
    }
    let gen_data: Vec<HullVertex> = generators
        .iter()
        .map(HullVertex::new)
        .collect::<Result<_, _>>()?;

    let mut vertices: BTreeMap<LatticeClass, HullVertex> = BTreeMap::new();
    let mut queue: Vec<LatticeClass> = Vec::new();
    let push = |class: LatticeClass,
                vertices: &mut BTreeMap<LatticeClass, HullVertex>,
                queue: &mut Vec<LatticeClass>|
     -> Result<(), BuildingError> {
        if !vertices.contains_key(&class) {
            let data = HullVertex::new(&class)?;
            vertices.insert(class.clone(), data);
            queue.push(class);
        }
        Ok(())
    };
    for g in &generators {
        push(g.clone(), &mut vertices, &mut queue)?;
    }

    // box seeding: intersections over m_1 = 0, |m_i| <= spread_i
    let spreads: Vec<i64> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let (lo, hi) =
                transition_window(&generators[0], &gen_data[0].inv, g, &gen_data[i].inv)?;
            Ok(hi - lo)
        })
        .collect::<Result<Vec<_>, BuildingError>>()?;
    if generators.len() > 1 {
        let mut offsets: Vec<i64> = spreads.iter().map(|d| -d).collect();
        'box_enum: loop {
            let mut dual = gen_data[0].dual.clone();
            for (i, g) in gen_data.iter().enumerate().skip(1) {
                // dual of pi^m Lambda is pi^(-m) times the dual
                let shifted = g.dual.scale_uniformizer(-offsets[i]);
                dual = column_hermite(&dual.hcat(&shifted)?)?;
            }
            let rep = dual.inverse()?.transpose();
            push(LatticeClass::new(&rep)?, &mut vertices, &mut queue)?;

            let mut i = 1;
            loop {
                if i >= offsets.len() {
                    break 'box_enum;
                }
                offsets[i] += 1;
                if offsets[i] <= spreads[i] {
                    break;
                }
                offsets[i] = -spreads[i];
                i += 1;
            }
        }
    }

    // generator closure to a fixpoint
    while let Some(current) = queue.pop() {
        let current_data = HullVertex::new(&current)?;
        for (g, gd) in generators.iter().zip(&gen_data) {
            let (lo, hi) = transition_window(g, &gd.inv, &current, &current_data.inv)?;
            // m <= lo nests to [current], m >= hi nests to [g]
            for m in lo + 1..hi {
                let shifted_dual = gd.dual.scale_uniformizer(-m);
                let rep = intersect_duals(&shifted_dual, &current_data.dual)?;
                push(LatticeClass::new(&rep)?, &mut vertices, &mut queue)?;
            }
        }
    }

    Ok(ConvexHull {
        generators,
        vertices: vertices.into_keys().collect(),
    })
}
