//! Combinatorial classification of Mustafin special fibers: saturated
//! residue reductions of transition maps, subset kernel dimensions d_I, the
//! admissible multidegree sets M(h), the image-dimension formula, vertexwise
//! component reports over the convex hull, and the basis criterion linking
//! saturated matrix families to hull membership of the standard lattice.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::building::{convex_hull, BuildingError, ConvexHull, LatticeClass};
use crate::linalg::smith_form_dvr;
use crate::matrix::Matrix;
use crate::residue::ResMat;
use crate::scalar::ScalarError;
use crate::valuation::Valuation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MustafinError {
    TooManyFactors,
    RectangularityViolation,
    SingularB,
    SingularMatrix,
    BackendMismatch,
    /// A theorem-backed invariant failed; this signals a bug, not bad input.
    TheoremViolation,
    Scalar(ScalarError),
}

impl fmt::Display for MustafinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MustafinError::TooManyFactors => {
                write!(f, "more than 20 maps: subset enumeration refused")
            }
            MustafinError::RectangularityViolation => {
                write!(f, "the family must contain exactly d matrices of d rows")
            }
            MustafinError::SingularB => write!(f, "an assembled column matrix is singular"),
            MustafinError::SingularMatrix => write!(f, "matrix is singular"),
            MustafinError::BackendMismatch => write!(f, "mixed scalar backends"),
            MustafinError::TheoremViolation => write!(
                f,
                "saturated family of full multi-projective dimension without the standard \
                 lattice in its hull: internal invariant violated"
            ),
            MustafinError::Scalar(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MustafinError {}

impl From<ScalarError> for MustafinError {
    fn from(e: ScalarError) -> MustafinError {
        match e {
            ScalarError::SingularMatrix => MustafinError::SingularMatrix,
            ScalarError::BackendMismatch => MustafinError::BackendMismatch,
            other => MustafinError::Scalar(other),
        }
    }
}

impl From<BuildingError> for MustafinError {
    fn from(e: BuildingError) -> MustafinError {
        match e {
            BuildingError::SingularMatrix => MustafinError::SingularMatrix,
            BuildingError::BackendMismatch => MustafinError::BackendMismatch,
            BuildingError::EmptyFamily => MustafinError::RectangularityViolation,
            BuildingError::Scalar(s) => MustafinError::Scalar(s),
        }
    }
}

/// The saturated residue reductions of the transition maps of a lattice
/// family at one vertex of the building.
#[derive(Debug, Clone)]
pub struct ReducedMapFamily {
    pub vertex: LatticeClass,
    pub maps: Vec<ResMat>,
}

/// For each lattice representative M_i and vertex representative G, reduces
/// the inverse transition in the coordinates of the vertex lattice: the map
/// carrying the vertex's projective space into the i-th factor has matrix
/// A_i = M_i^-1 G, which is saturated by pi^-s and reduced modulo the
/// maximal ideal. Changing the vertex representative by a unimodular column
/// change multiplies A_i on the right and leaves every kernel dimension
/// unchanged, so the family is well defined on homothety classes.
pub fn reduced_maps(gamma: &[Matrix], vertex: &Matrix) -> Result<ReducedMapFamily, MustafinError> {
    let mut inverses = Vec::with_capacity(gamma.len());
    for m in gamma {
        if m.backend() != vertex.backend() || m.rows() != vertex.rows() {
            return Err(MustafinError::BackendMismatch);
        }
        inverses.push(m.inverse()?);
    }
    reduced_maps_from_inverses(&inverses, vertex)
}

fn reduced_maps_from_inverses(
    gamma_inverses: &[Matrix],
    vertex: &Matrix,
) -> Result<ReducedMapFamily, MustafinError> {
    let mut maps = Vec::with_capacity(gamma_inverses.len());
    for inv in gamma_inverses {
        let a = inv.mul(vertex)?;
        let (_, saturated) = a.saturate()?;
        maps.push(saturated.residue_matrix()?);
    }
    Ok(ReducedMapFamily {
        vertex: LatticeClass::new(vertex)?,
        maps,
    })
}

/// Subset kernel dimensions: key = bitmask over the map indices, value =
/// dim of the intersection of the kernels. The empty mask carries d.
pub type SubsetTable = BTreeMap<u32, usize>;

pub fn kernel_profile(maps: &[ResMat]) -> Result<SubsetTable, MustafinError> {
    let n = maps.len();
    if n > 20 {
        return Err(MustafinError::TooManyFactors);
    }
    assert!(n > 0, "kernel profile of an empty family");
    let d = maps[0].cols();
    let mut table = SubsetTable::new();
    table.insert(0, d);
    for mask in 1u32..(1 << n) {
        let members: Vec<&ResMat> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &maps[i])
            .collect();
        let stacked = ResMat::vstack(&members);
        table.insert(mask, stacked.kernel_dim());
    }
    Ok(table)
}

/// All multidegree vectors m in N^n with sum h satisfying, for every
/// nonempty subset I, sum_{i in I} m_i < d - d_I. Lexicographically sorted.
pub fn m_set(table: &SubsetTable, h: usize, d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = alloc::vec![0usize; n];
    enumerate_compositions(table, h, d, n, 0, &mut current, &mut out);
    out
}

fn enumerate_compositions(
    table: &SubsetTable,
    remaining: usize,
    d: usize,
    n: usize,
    pos: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == n {
        if remaining == 0 && admissible(table, current, d, n) {
            out.push(current.clone());
        }
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        enumerate_compositions(table, remaining - v, d, n, pos + 1, current, out);
    }
    current[pos] = 0;
}

fn admissible(table: &SubsetTable, m: &[usize], d: usize, n: usize) -> bool {
    for mask in 1u32..(1 << n) {
        let sum: usize = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| m[i]).sum();
        let d_i = *table.get(&mask).expect("complete subset table");
        if sum + d_i >= d {
            return false;
        }
    }
    true
}

/// dim of the closed image: the largest h with M(h) nonempty. The search
/// also checks the staircase structure M(h) nonempty => M(h-1) nonempty.
pub fn image_dimension(table: &SubsetTable, d: usize, n: usize) -> usize {
    let mut best = 0;
    let mut prev_nonempty = true;
    for h in 0..d {
        let nonempty = !m_set(table, h, d, n).is_empty();
        if nonempty {
            assert!(prev_nonempty, "admissible multidegrees are downward closed");
            best = h;
        }
        prev_nonempty = nonempty;
    }
    best
}

/// Classification data of one vertex of the hull.
#[derive(Debug, Clone)]
pub struct VertexReport {
    pub vertex: LatticeClass,
    pub rank_vector: Vec<usize>,
    pub d_table: SubsetTable,
    pub dimension: usize,
    /// M(dimension): the multidegree signature of the component type.
    pub top_multidegrees: Vec<Vec<usize>>,
    pub is_component: bool,
}

/// Reports for every vertex of conv(Gamma); the components of the special
/// fiber are exactly the vertices of full dimension d - 1.
#[derive(Debug, Clone)]
pub struct FiberReport {
    pub hull: ConvexHull,
    pub reports: Vec<VertexReport>,
    /// The classification theorem assumes an infinite residue field; over a
    /// p-adic backend the combinatorics are computed anyway and this flag
    /// warns the caller.
    pub finite_residue_field: bool,
}

impl FiberReport {
    pub fn components(&self) -> impl Iterator<Item = &VertexReport> {
        self.reports.iter().filter(|r| r.is_component)
    }
}

pub fn vertex_report(gamma: &[Matrix], vertex: &Matrix) -> Result<VertexReport, MustafinError> {
    let family = reduced_maps(gamma, vertex)?;
    report_from_family(family, vertex.rows(), gamma.len())
}

fn report_from_family(
    family: ReducedMapFamily,
    d: usize,
    n: usize,
) -> Result<VertexReport, MustafinError> {
    let rank_vector = family.maps.iter().map(|m| m.rank()).collect();
    let d_table = kernel_profile(&family.maps)?;
    let dimension = image_dimension(&d_table, d, n);
    let top_multidegrees = m_set(&d_table, dimension, d, n);
    Ok(VertexReport {
        vertex: family.vertex,
        rank_vector,
        d_table,
        dimension,
        top_multidegrees,
        is_component: dimension == d - 1,
    })
}

pub fn special_fiber_components(gamma: &[Matrix]) -> Result<FiberReport, MustafinError> {
    if gamma.is_empty() {
        return Err(MustafinError::RectangularityViolation);
    }
    if gamma.len() > 20 {
        return Err(MustafinError::TooManyFactors);
    }
    let hull = convex_hull(gamma)?;
    let d = gamma[0].rows();
    let mut inverses = Vec::with_capacity(gamma.len());
    for m in gamma {
        if m.backend() != gamma[0].backend() || m.rows() != d {
            return Err(MustafinError::BackendMismatch);
        }
        inverses.push(m.inverse()?);
    }
    let mut reports = Vec::with_capacity(hull.vertices.len());
    for v in &hull.vertices {
        let family = reduced_maps_from_inverses(&inverses, v.matrix())?;
        reports.push(report_from_family(family, d, gamma.len())?);
    }
    Ok(FiberReport {
        finite_residue_field: gamma[0].backend().finite_residue_field(),
        hull,
        reports,
    })
}

/// Report on a linear space of matrices spanned by d matrices A_1..A_d of
/// shape d x e: saturation of the family, the dimension of the
/// multi-projective closure of the residue space, the induced lattice
/// classes Lambda_i = B_i^-1 O^d and hull membership of the standard class.
#[derive(Debug, Clone)]
pub struct MpReport {
    pub saturated: bool,
    pub mp_dimension: usize,
    pub gamma: Vec<LatticeClass>,
    pub hull_contains_standard: Option<bool>,
}

/// Column-assembled bridge matrices: B_i has as j-th column the i-th column
/// of A_j. Invertibility is the caller's concern.
pub fn assemble_bridges(mats: &[Matrix]) -> Result<Vec<Matrix>, MustafinError> {
    let n = mats.len();
    let first = &mats[0];
    let d = first.rows();
    let e = first.cols();
    if n != d {
        return Err(MustafinError::RectangularityViolation);
    }
    if mats
        .iter()
        .any(|m| m.rows() != d || m.cols() != e || m.backend() != first.backend())
    {
        return Err(MustafinError::BackendMismatch);
    }
    let mut bridges = Vec::with_capacity(e);
    for i in 0..e {
        bridges.push(Matrix::from_fn(first.backend(), d, n, |r, j| {
            mats[j].at(r, i).clone()
        }));
    }
    Ok(bridges)
}

/// Whether the family is an integral basis of the module it spans inside
/// the integral matrices: all Smith divisors of the stacked coordinate
/// matrix are units.
fn family_is_saturated(mats: &[Matrix]) -> bool {
    let first = &mats[0];
    let d = first.rows();
    let e = first.cols();
    let stacked = Matrix::from_fn(first.backend(), d * e, mats.len(), |r, j| {
        mats[j].at(r / e, r % e).clone()
    });
    smith_form_dvr(&stacked)
        .divisor_valuations
        .iter()
        .all(|v| *v == Valuation::Finite(0))
}

fn mp_report(mats: &[Matrix], with_hull: bool) -> Result<MpReport, MustafinError> {
    if mats.is_empty() {
        return Err(MustafinError::RectangularityViolation);
    }
    let bridges = assemble_bridges(mats)?;
    if bridges.len() > 20 {
        return Err(MustafinError::TooManyFactors);
    }
    let d = mats[0].rows();
    let backend = mats[0].backend();
    let saturated = family_is_saturated(mats);

    // a saturated family must produce invertible bridges for the lattice
    // picture to apply; a non-saturated one still gets its dimension report
    let invertible = bridges.iter().all(|b| b.rank() == d);
    if saturated && !invertible {
        return Err(MustafinError::SingularB);
    }

    // at the standard vertex the reduced maps are the saturated bridges
    let mut maps = Vec::with_capacity(bridges.len());
    for b in &bridges {
        let (_, sat) = b.saturate()?;
        maps.push(sat.residue_matrix()?);
    }
    let d_table = kernel_profile(&maps)?;
    let mp_dimension = image_dimension(&d_table, d, bridges.len());

    let (gamma, hull_contains_standard) = if invertible {
        let mut lattice_reps = Vec::with_capacity(bridges.len());
        for b in &bridges {
            lattice_reps.push(b.inverse()?);
        }
        let gamma: Vec<LatticeClass> = lattice_reps
            .iter()
            .map(LatticeClass::new)
            .collect::<Result<_, _>>()?;
        let hull_flag = if with_hull {
            let hull = convex_hull(&lattice_reps)?;
            Some(hull.contains_class(&LatticeClass::standard(backend, d)))
        } else {
            None
        };
        (gamma, hull_flag)
    } else {
        (Vec::new(), None)
    };

    if saturated && mp_dimension == d - 1 && hull_contains_standard == Some(false) {
        return Err(MustafinError::TheoremViolation);
    }

    Ok(MpReport {
        saturated,
        mp_dimension,
        gamma,
        hull_contains_standard,
    })
}

/// Saturation flag and multi-projective dimension of the family.
pub fn mp_dimension(mats: &[Matrix]) -> Result<MpReport, MustafinError> {
    mp_report(mats, false)
}

/// Full report including the hull test: when the family is saturated and the
/// multi-projective dimension is d - 1, the standard lattice class must lie
/// in conv(Gamma).
pub fn basis_criterion(mats: &[Matrix]) -> Result<MpReport, MustafinError> {
    mp_report(mats, true)
}
