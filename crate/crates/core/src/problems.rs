//! Benchmark problems with closed-form solutions, sources and every analytic
//! derivative the schemes and the Neumann ghost rule consume.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::{Face, Grid, Side};
use crate::scalar::Real;
use crate::stencil::SourceBundle;

pub type ScalarFn<T, const D: usize> = Arc<dyn Fn([T; D]) -> T + Send + Sync>;
pub type VectorFn<T, const D: usize> = Arc<dyn Fn([T; D]) -> [T; D] + Send + Sync>;

/// Derivatives of the Neumann datum `g` along the face. Entry `i` of the
/// arrays refers to the `i`-th tangential axis in increasing axis order; 2D
/// problems leave the second entry zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentialDerivs<T> {
    pub g_tt: [T; 2],
    pub g_tttt: [T; 2],
    /// `d^4 g / dt1^2 dt2^2` (3D only).
    pub g_t1t1t2t2: T,
}

/// Normal derivatives of the source at a face point, the normal being the
/// positive axis direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalDerivs<T> {
    pub f_n: T,
    pub f_nnn: T,
    pub f_ntt: [T; 2],
}

impl<T: Real> TangentialDerivs<T> {
    pub fn zero() -> Self {
        TangentialDerivs {
            g_tt: [T::zero(); 2],
            g_tttt: [T::zero(); 2],
            g_t1t1t2t2: T::zero(),
        }
    }
}

/// `du/dx_axis = g` on a face. The sign convention is the positive axis
/// direction on both the low and the high face.
#[derive(Clone)]
pub struct NeumannData<T, const D: usize> {
    pub g: ScalarFn<T, D>,
    pub tangential: Option<Arc<dyn Fn([T; D]) -> TangentialDerivs<T> + Send + Sync>>,
    pub source_normal: Option<Arc<dyn Fn([T; D]) -> NormalDerivs<T> + Send + Sync>>,
}

#[derive(Clone)]
pub enum FaceCondition<T, const D: usize> {
    Dirichlet(ScalarFn<T, D>),
    Neumann(NeumannData<T, D>),
}

impl<T, const D: usize> FaceCondition<T, D> {
    pub fn is_neumann(&self) -> bool {
        matches!(self, FaceCondition::Neumann(_))
    }
}

impl<T, const D: usize> fmt::Debug for FaceCondition<T, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceCondition::Dirichlet(_) => f.write_str("Dirichlet"),
            FaceCondition::Neumann(_) => f.write_str("Neumann"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    Zero2,
    Zero3,
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::P1,
        ProblemId::P2,
        ProblemId::P3,
        ProblemId::P4,
        ProblemId::P5,
        ProblemId::P6,
        ProblemId::P7,
        ProblemId::Zero2,
        ProblemId::Zero3,
    ];

    pub fn dimension(self) -> usize {
        match self {
            ProblemId::P1 | ProblemId::P2 | ProblemId::P3 | ProblemId::P4 | ProblemId::Zero2 => 2,
            _ => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProblemId::P1 => "p1",
            ProblemId::P2 => "p2",
            ProblemId::P3 => "p3",
            ProblemId::P4 => "p4",
            ProblemId::P5 => "p5",
            ProblemId::P6 => "p6",
            ProblemId::P7 => "p7",
            ProblemId::Zero2 => "zero2",
            ProblemId::Zero3 => "zero3",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ProblemId::P1 => "Dirichlet, [0,1]x[0,1/2], u = sin(pi x) sin(l pi y) + sin(pi x) sin(pi y)/(l^2-1), K^2 = pi^2 (1+l^2)",
            ProblemId::P2 => "as p1 with du/dy = 0 on y = 1/2",
            ProblemId::P3 => "Dirichlet, unit square, u = sin(pi x) sin(K pi y)",
            ProblemId::P4 => "Dirichlet, [0,pi]^2, u = sin(l x) sin(m y), K free",
            ProblemId::P5 => "Dirichlet, [0,1]^2x[0,1/2], 3D analogue of p1, K^2 = pi^2 (2+l^2)",
            ProblemId::P6 => "unit cube, u = cos(pi x) sin(pi y) sin(pi z), du/dx = 0 on x = 0",
            ProblemId::P7 => "Dirichlet, [-1/2,1/2]^3, u = cos(zeta . x)",
            ProblemId::Zero2 => "unit square, u = f = 0",
            ProblemId::Zero3 => "unit cube, u = f = 0",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.label() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown problem '{s}'")))
    }
}

/// Free parameters of the catalog problems. Unused fields are ignored;
/// missing ones fall back to the defaults below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub l: Option<i64>,
    pub m: Option<i64>,
    pub k: Option<f64>,
    pub zeta: Option<[f64; 3]>,
}

impl ProblemParams {
    pub const NONE: ProblemParams = ProblemParams {
        l: None,
        m: None,
        k: None,
        zeta: None,
    };

    pub fn with_l(l: i64) -> Self {
        ProblemParams { l: Some(l), ..Self::NONE }
    }

    pub fn with_k(k: f64) -> Self {
        ProblemParams { k: Some(k), ..Self::NONE }
    }
}

/// A self-describing boundary value problem `lap u + K^2 u = f` on a box.
#[derive(Clone)]
pub struct Problem<T, const D: usize> {
    pub id: ProblemId,
    pub name: String,
    pub lo: [T; D],
    pub hi: [T; D],
    pub wavenumber: T,
    pub exact: ScalarFn<T, D>,
    pub source: ScalarFn<T, D>,
    /// `[f_xx, f_yy(, f_zz)]`.
    pub source_d2: VectorFn<T, D>,
    /// Indexed by [`Face::index`].
    pub faces: Vec<FaceCondition<T, D>>,
    pub tolerance: T,
    /// Largest angular frequency present in `u` and `f`; sets sampling steps
    /// for numerical checks.
    pub frequency: T,
}

pub type Problem2D<T> = Problem<T, 2>;
pub type Problem3D<T> = Problem<T, 3>;

impl<T: fmt::Debug, const D: usize> fmt::Debug for Problem<T, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("wavenumber", &self.wavenumber)
            .field("faces", &self.faces)
            .finish()
    }
}

impl<T: Real, const D: usize> Problem<T, D> {
    pub fn face(&self, face: Face) -> &FaceCondition<T, D> {
        &self.faces[face.index()]
    }

    /// Grid with `n` cells along x.
    pub fn grid(&self, n: usize) -> Result<Grid<T, D>> {
        Grid::with_cells_along_x(self.lo, self.hi, n)
    }

    pub fn neumann_faces(&self) -> Vec<Face> {
        Face::all(D).filter(|f| self.face(*f).is_neumann()).collect()
    }
}

/// Samples the exact solution at every node (ghost layer included).
pub fn exact_field<T: Real, const D: usize>(problem: &Problem<T, D>, grid: &Grid<T, D>) -> NodeField<T, D> {
    let u = problem.exact.clone();
    NodeField::from_fn(grid, move |p| u(p))
}

pub fn source_bundle<T: Real, const D: usize>(
    problem: &Problem<T, D>,
    grid: &Grid<T, D>,
) -> SourceBundle<T, D> {
    let f = problem.source.clone();
    let d2 = problem.source_d2.clone();
    let fields = (0..D)
        .map(|a| NodeField::from_fn(grid, |p| d2(p)[a]))
        .collect();
    SourceBundle {
        f: NodeField::from_fn(grid, move |p| f(p)),
        d2: fields,
    }
}

fn c<T: Real>(x: f64) -> T {
    T::from_f64(x)
}

fn odd_l(l: i64) -> Result<i64> {
    if l < 3 || l % 2 == 0 {
        return Err(Error::Parameter(format!("l must be an odd number >= 3, got {l}")));
    }
    Ok(l)
}

fn dirichlet_from<T: Real, const D: usize>(u: &ScalarFn<T, D>) -> FaceCondition<T, D> {
    FaceCondition::Dirichlet(u.clone())
}

fn zero_fn<T: Real, const D: usize>() -> ScalarFn<T, D> {
    Arc::new(|_| T::zero())
}

/// Shared closed form of the first two problems.
fn mixed_sine_2d<T: Real>(lt: T) -> (ScalarFn<T, 2>, ScalarFn<T, 2>, VectorFn<T, 2>, T) {
    let pi = T::PI();
    let denom = lt * lt - T::one();
    let exact: ScalarFn<T, 2> = Arc::new(move |p| {
        let sx = (pi * p[0]).sin();
        sx * (lt * pi * p[1]).sin() + sx * (pi * p[1]).sin() / denom
    });
    let source: ScalarFn<T, 2> = Arc::new(move |p| pi * pi * (pi * p[0]).sin() * (pi * p[1]).sin());
    let d2: VectorFn<T, 2> = Arc::new(move |p| {
        let v = -pi * pi * pi * pi * (pi * p[0]).sin() * (pi * p[1]).sin();
        [v, v]
    });
    let k = pi * (T::one() + lt * lt).sqrt();
    (exact, source, d2, k)
}

pub fn p1_dirichlet_2d<T: Real>(l: i64) -> Result<Problem2D<T>> {
    let l = odd_l(l)?;
    let mut p = p1_real_l(c::<T>(l as f64))?;
    p.name = format!("p1 (l={l})");
    Ok(p)
}

/// The first problem with a real `l > 1`. The closed form still solves the
/// equation; only the boundary datum on `y = 1/2` loses its simple form. Used
/// to hit wave numbers between the odd-`l` ones.
pub fn p1_real_l<T: Real>(l: T) -> Result<Problem2D<T>> {
    if !(l > T::one()) {
        return Err(Error::Parameter(format!("l must exceed 1, got {l}")));
    }
    let (exact, source, source_d2, k) = mixed_sine_2d::<T>(l);
    let faces = (0..4).map(|_| dirichlet_from(&exact)).collect();
    Ok(Problem {
        id: ProblemId::P1,
        name: format!("p1 (K={k})"),
        lo: [T::zero(); 2],
        hi: [T::one(), c(0.5)],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-11),
        frequency: l * T::PI(),
    })
}

pub fn p2_neumann_2d<T: Real>(l: i64) -> Result<Problem2D<T>> {
    let l = odd_l(l)?;
    let (exact, source, source_d2, k) = mixed_sine_2d::<T>(c::<T>(l as f64));
    let pi = T::PI();
    let mut faces: Vec<_> = (0..4).map(|_| dirichlet_from(&exact)).collect();
    faces[Face::new(1, Side::High).index()] = FaceCondition::Neumann(NeumannData {
        g: zero_fn(),
        tangential: Some(Arc::new(|_| TangentialDerivs::zero())),
        source_normal: Some(Arc::new(move |p: [T; 2]| {
            let sc = (pi * p[0]).sin() * (pi * p[1]).cos();
            let pi3 = pi * pi * pi;
            let pi5 = pi3 * pi * pi;
            NormalDerivs {
                f_n: pi3 * sc,
                f_nnn: -pi5 * sc,
                f_ntt: [-pi5 * sc, T::zero()],
            }
        })),
    });
    Ok(Problem {
        id: ProblemId::P2,
        name: format!("p2 (l={l})"),
        lo: [T::zero(); 2],
        hi: [T::one(), c(0.5)],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-10),
        frequency: c::<T>(l as f64) * T::PI(),
    })
}

pub fn p3_sin_kpi_2d<T: Real>(k: T) -> Result<Problem2D<T>> {
    if !(k >= T::zero()) {
        return Err(Error::Parameter(format!("K must be non-negative, got {k}")));
    }
    let pi = T::PI();
    let exact: ScalarFn<T, 2> = Arc::new(move |p| (pi * p[0]).sin() * (k * pi * p[1]).sin());
    let amp = k * k - pi * pi - k * k * pi * pi;
    let u = exact.clone();
    let source: ScalarFn<T, 2> = Arc::new(move |p| amp * u(p));
    let u = exact.clone();
    let source_d2: VectorFn<T, 2> = Arc::new(move |p| {
        let f = amp * u(p);
        [-pi * pi * f, -k * k * pi * pi * f]
    });
    let faces = (0..4).map(|_| dirichlet_from(&exact)).collect();
    Ok(Problem {
        id: ProblemId::P3,
        name: format!("p3 (K={k})"),
        lo: [T::zero(); 2],
        hi: [T::one(); 2],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-11),
        frequency: (k + T::one()) * pi,
    })
}

pub fn p4_sin_lm_2d<T: Real>(l: i64, m: i64, k: T) -> Result<Problem2D<T>> {
    if !(k >= T::zero()) {
        return Err(Error::Parameter(format!("K must be non-negative, got {k}")));
    }
    let lt = c::<T>(l as f64);
    let mt = c::<T>(m as f64);
    let exact: ScalarFn<T, 2> = Arc::new(move |p| (lt * p[0]).sin() * (mt * p[1]).sin());
    let amp = k * k - lt * lt - mt * mt;
    let u = exact.clone();
    let source: ScalarFn<T, 2> = Arc::new(move |p| amp * u(p));
    let u = exact.clone();
    let source_d2: VectorFn<T, 2> = Arc::new(move |p| {
        let f = amp * u(p);
        [-lt * lt * f, -mt * mt * f]
    });
    let faces = (0..4).map(|_| dirichlet_from(&exact)).collect();
    Ok(Problem {
        id: ProblemId::P4,
        name: format!("p4 (l={l}, m={m}, K={k})"),
        lo: [T::zero(); 2],
        hi: [T::PI(); 2],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-11),
        frequency: k.max(lt.abs()).max(mt.abs()) + T::one(),
    })
}

pub fn p5_dirichlet_3d<T: Real>(l: i64) -> Result<Problem3D<T>> {
    let l = odd_l(l)?;
    let pi = T::PI();
    let lt = c::<T>(l as f64);
    let denom = lt * lt - T::one();
    let exact: ScalarFn<T, 3> = Arc::new(move |p| {
        let sxy = (pi * p[0]).sin() * (pi * p[1]).sin();
        sxy * (lt * pi * p[2]).sin() + sxy * (pi * p[2]).sin() / denom
    });
    let sss = move |p: [T; 3]| (pi * p[0]).sin() * (pi * p[1]).sin() * (pi * p[2]).sin();
    let source: ScalarFn<T, 3> = Arc::new(move |p| pi * pi * sss(p));
    let source_d2: VectorFn<T, 3> = Arc::new(move |p| {
        let v = -pi * pi * pi * pi * sss(p);
        [v, v, v]
    });
    let faces = (0..6).map(|_| dirichlet_from(&exact)).collect();
    Ok(Problem {
        id: ProblemId::P5,
        name: format!("p5 (l={l})"),
        lo: [T::zero(); 3],
        hi: [T::one(), T::one(), c(0.5)],
        wavenumber: pi * (c::<T>(2.0) + lt * lt).sqrt(),
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-11),
        frequency: lt * pi,
    })
}

pub fn p6_neumann_3d<T: Real>(k: T) -> Result<Problem3D<T>> {
    if !(k >= T::zero()) {
        return Err(Error::Parameter(format!("K must be non-negative, got {k}")));
    }
    let pi = T::PI();
    let amp = k * k - c::<T>(3.0) * pi * pi;
    let exact: ScalarFn<T, 3> =
        Arc::new(move |p| (pi * p[0]).cos() * (pi * p[1]).sin() * (pi * p[2]).sin());
    let u = exact.clone();
    let source: ScalarFn<T, 3> = Arc::new(move |p| amp * u(p));
    let u = exact.clone();
    let source_d2: VectorFn<T, 3> = Arc::new(move |p| {
        let v = -pi * pi * amp * u(p);
        [v, v, v]
    });
    let mut faces: Vec<_> = (0..6).map(|_| dirichlet_from(&exact)).collect();
    faces[Face::new(0, Side::Low).index()] = FaceCondition::Neumann(NeumannData {
        g: zero_fn(),
        tangential: Some(Arc::new(|_| TangentialDerivs::zero())),
        source_normal: Some(Arc::new(move |p: [T; 3]| {
            let sss = (pi * p[0]).sin() * (pi * p[1]).sin() * (pi * p[2]).sin();
            let pi3 = pi * pi * pi;
            NormalDerivs {
                f_n: -pi * amp * sss,
                f_nnn: pi3 * amp * sss,
                f_ntt: [pi3 * amp * sss, pi3 * amp * sss],
            }
        })),
    });
    Ok(Problem {
        id: ProblemId::P6,
        name: format!("p6 (K={k})"),
        lo: [T::zero(); 3],
        hi: [T::one(); 3],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-13),
        frequency: k.max(pi) + T::one(),
    })
}

pub fn p7_plane_cos_3d<T: Real>(k: T, zeta: [T; 3]) -> Result<Problem3D<T>> {
    if !(k >= T::zero()) {
        return Err(Error::Parameter(format!("K must be non-negative, got {k}")));
    }
    let z2 = zeta[0] * zeta[0] + zeta[1] * zeta[1] + zeta[2] * zeta[2];
    let amp = k * k - z2;
    let exact: ScalarFn<T, 3> =
        Arc::new(move |p| (zeta[0] * p[0] + zeta[1] * p[1] + zeta[2] * p[2]).cos());
    let u = exact.clone();
    let source: ScalarFn<T, 3> = Arc::new(move |p| amp * u(p));
    let u = exact.clone();
    let source_d2: VectorFn<T, 3> = Arc::new(move |p| {
        let f = amp * u(p);
        zeta.map(|z| -z * z * f)
    });
    let faces = (0..6).map(|_| dirichlet_from(&exact)).collect();
    let half = c::<T>(0.5);
    Ok(Problem {
        id: ProblemId::P7,
        name: format!("p7 (K={k}, zeta=({}, {}, {}))", zeta[0], zeta[1], zeta[2]),
        lo: [-half; 3],
        hi: [half; 3],
        wavenumber: k,
        exact,
        source,
        source_d2,
        faces,
        tolerance: c(1e-12),
        frequency: k.max(z2.sqrt()) + T::one(),
    })
}

/// `u = f = 0` with homogeneous Dirichlet data on the unit box.
pub fn zero_problem<T: Real, const D: usize>(k: T) -> Problem<T, D> {
    let z = zero_fn::<T, D>();
    let d2: VectorFn<T, D> = Arc::new(|_| [T::zero(); D]);
    Problem {
        id: if D == 2 { ProblemId::Zero2 } else { ProblemId::Zero3 },
        name: "zero".into(),
        lo: [T::zero(); D],
        hi: [T::one(); D],
        wavenumber: k,
        exact: z.clone(),
        source: z.clone(),
        source_d2: d2,
        faces: (0..2 * D).map(|_| FaceCondition::Dirichlet(z.clone())).collect(),
        tolerance: c(1e-12),
        frequency: k + T::one(),
    }
}

/// A catalog problem of either dimension.
#[derive(Clone, Debug)]
pub enum AnyProblem<T> {
    Two(Problem2D<T>),
    Three(Problem3D<T>),
}

impl<T: Real> AnyProblem<T> {
    pub fn id(&self) -> ProblemId {
        match self {
            AnyProblem::Two(p) => p.id,
            AnyProblem::Three(p) => p.id,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            AnyProblem::Two(p) => &p.name,
            AnyProblem::Three(p) => &p.name,
        }
    }

    pub fn wavenumber(&self) -> T {
        match self {
            AnyProblem::Two(p) => p.wavenumber,
            AnyProblem::Three(p) => p.wavenumber,
        }
    }

    pub fn tolerance(&self) -> T {
        match self {
            AnyProblem::Two(p) => p.tolerance,
            AnyProblem::Three(p) => p.tolerance,
        }
    }
}

/// Default parameters per problem, matching the published test cases.
pub fn default_params(id: ProblemId) -> ProblemParams {
    match id {
        ProblemId::P1 | ProblemId::P2 => ProblemParams::with_l(7),
        ProblemId::P3 => ProblemParams::with_k(30.0),
        ProblemId::P4 => ProblemParams {
            l: Some(10),
            m: Some(10),
            k: Some(14.0),
            zeta: None,
        },
        ProblemId::P5 => ProblemParams::with_l(9),
        ProblemId::P6 => ProblemParams::with_k(50.0),
        ProblemId::P7 => ProblemParams {
            k: Some(12.0),
            zeta: Some([6.0, 8.0, 7.0]),
            ..ProblemParams::NONE
        },
        ProblemId::Zero2 | ProblemId::Zero3 => ProblemParams::with_k(1.0),
    }
}

/// Builds a catalog problem. Parameters that the problem does not use are
/// rejected so that a typo does not silently run the default case.
pub fn build_problem<T: Real>(id: ProblemId, params: &ProblemParams) -> Result<AnyProblem<T>> {
    let d = default_params(id);
    let unused = |name: &str, given: bool, used: bool| -> Result<()> {
        if given && !used {
            return Err(Error::Config(format!("problem {id} takes no parameter '{name}'")));
        }
        Ok(())
    };
    unused("l", params.l.is_some(), d.l.is_some())?;
    unused("m", params.m.is_some(), d.m.is_some())?;
    unused("k", params.k.is_some(), d.k.is_some())?;
    unused("zeta", params.zeta.is_some(), d.zeta.is_some())?;
    let l = params.l.or(d.l).unwrap_or(0);
    let m = params.m.or(d.m).unwrap_or(0);
    let k = c::<T>(params.k.or(d.k).unwrap_or(0.0));
    let zeta = params.zeta.or(d.zeta).unwrap_or([0.0; 3]).map(c::<T>);
    Ok(match id {
        ProblemId::P1 => AnyProblem::Two(p1_dirichlet_2d(l)?),
        ProblemId::P2 => AnyProblem::Two(p2_neumann_2d(l)?),
        ProblemId::P3 => AnyProblem::Two(p3_sin_kpi_2d(k)?),
        ProblemId::P4 => AnyProblem::Two(p4_sin_lm_2d(l, m, k)?),
        ProblemId::P5 => AnyProblem::Three(p5_dirichlet_3d(l)?),
        ProblemId::P6 => AnyProblem::Three(p6_neumann_3d(k)?),
        ProblemId::P7 => AnyProblem::Three(p7_plane_cos_3d(k, zeta)?),
        ProblemId::Zero2 => AnyProblem::Two(zero_problem(k)),
        ProblemId::Zero3 => AnyProblem::Three(zero_problem(k)),
    })
}

/// Every catalog problem at its default parameters.
pub fn problem_catalog<T: Real>() -> Vec<AnyProblem<T>> {
    ProblemId::ALL
        .iter()
        .map(|&id| build_problem(id, &ProblemParams::NONE).expect("defaults are valid"))
        .collect()
}

/// Eighth-order central second difference with step `s`.
pub fn second_difference<T: Real>(f: impl Fn(T) -> T, x: T, s: T) -> T {
    second_difference_mass(f, x, s).0
}

/// [`second_difference`] together with `sum |w_j f(x_j)|`, the size of the
/// samples that cancel in it.
fn second_difference_mass<T: Real>(f: impl Fn(T) -> T, x: T, s: T) -> (T, T) {
    const W: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
    let f0 = f(x);
    let mut acc = c::<T>(W[0]) * f0;
    let mut mass = (c::<T>(W[0]) * f0).abs();
    for (j, &w) in W.iter().enumerate().skip(1) {
        let d = c::<T>(j as f64) * s;
        let (a, b) = (f(x + d), f(x - d));
        acc += c::<T>(w) * (a + b);
        mass += c::<T>(w).abs() * (a.abs() + b.abs());
    }
    (acc / (s * s), mass)
}

/// Eighth-order central first difference with step `s`.
pub fn first_difference<T: Real>(f: impl Fn(T) -> T, x: T, s: T) -> T {
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut acc = T::zero();
    for (j, &w) in W.iter().enumerate() {
        let d = c::<T>((j + 1) as f64) * s;
        acc += c::<T>(w) * (f(x + d) - f(x - d));
    }
    acc / s
}

/// Relative PDE residual `|lap u + K^2 u - f| / scale` at `p`, with the
/// Laplacian of the supplied exact solution taken by finite differences. The
/// scale uses `frequency^2` times the size of the sampled `u` values, so that
/// near a zero of `u` it measures the data rather than the cancellation in
/// the difference.
pub fn pde_residual<T: Real, const D: usize>(problem: &Problem<T, D>, p: [T; D]) -> T {
    let s = c::<T>(0.02) / problem.frequency;
    let u = &problem.exact;
    let mut lap = T::zero();
    let mut mass = T::zero();
    for a in 0..D {
        let (d2, m) = second_difference_mass(
            |t| {
                let mut q = p;
                q[a] = t;
                u(q)
            },
            p[a],
            s,
        );
        lap += d2;
        mass += m;
    }
    let k2u = problem.wavenumber * problem.wavenumber * u(p);
    let f = (problem.source)(p);
    let scale = problem.frequency * problem.frequency * mass + lap.abs() + k2u.abs() + f.abs() + T::min_positive_value();
    (lap + k2u - f).abs() / scale
}
