//! Dirichlet data injection and ghost-point elimination for Neumann faces.
//!
//! On a Neumann face the face nodes are unknowns and the scheme is written at
//! them, reaching one layer outside the grid. The ghost values are eliminated
//! with the sixth-order relation `(u_{+1} - u_{-1}) / 2h = R`, where `R`
//! corrects `g = du/dn` with source and tangential-derivative terms.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::NodeField;
use crate::grid::{Face, Grid, Grid2D, Grid3D, GridIndexMap, Side};
use crate::problems::{FaceCondition, Problem, Problem2D, Problem3D};
use crate::scalar::Real;
use crate::sparse::{CsrMatrix, SparseSystem};

/// Unknown layout for a problem: interior nodes plus the nodes of every
/// Neumann face. Neumann faces on two different axes are rejected.
pub fn unknown_map<T: Real, const D: usize>(problem: &Problem<T, D>, grid: &Grid<T, D>) -> Result<GridIndexMap<D>> {
    let neumann = problem.neumann_faces();
    if let Some(axis) = neumann.first().map(|f| f.axis) {
        if neumann.iter().any(|f| f.axis != axis) {
            return Err(Error::Config(
                "Neumann conditions on faces of different axes are not supported".into(),
            ));
        }
    }
    let mut lo = [1usize; D];
    let mut hi = grid.cells().map(|n| n - 1);
    for f in neumann {
        match f.side {
            Side::Low => lo[f.axis] = 0,
            Side::High => hi[f.axis] = grid.cells()[f.axis],
        }
    }
    Ok(GridIndexMap::new(lo, hi))
}

fn on_face<T: Real, const D: usize>(grid: &Grid<T, D>, node: [isize; D], face: Face) -> bool {
    node[face.axis]
        == match face.side {
            Side::Low => 0,
            Side::High => grid.cells()[face.axis] as isize,
        }
}

/// Field holding the Dirichlet value at every known boundary node (zero
/// elsewhere). A node on several faces takes the first Dirichlet face in face
/// order; nodes only on Neumann faces are unknowns and stay zero.
pub fn dirichlet_values<T: Real, const D: usize>(problem: &Problem<T, D>, grid: &Grid<T, D>) -> NodeField<T, D> {
    let mut field = NodeField::zeros(grid);
    for node in grid.nodes().filter(|&n| grid.is_boundary(n)) {
        let hit = Face::all(D).find_map(|f| match problem.face(f) {
            FaceCondition::Dirichlet(g) if on_face(grid, node, f) => Some(g),
            _ => None,
        });
        if let Some(g) = hit {
            field.set(node, g(grid.point(node)));
        }
    }
    field
}

/// `R` at every node of a Neumann face, in the face's lexicographic node order.
pub fn neumann_ghost_values<T: Real, const D: usize>(
    problem: &Problem<T, D>,
    grid: &Grid<T, D>,
    face: Face,
) -> Result<Vec<([isize; D], T)>> {
    let FaceCondition::Neumann(data) = problem.face(face) else {
        return Err(Error::Config(format!("face {} is not a Neumann face", face.label())));
    };
    let tangential = data.tangential.as_ref().ok_or_else(|| {
        Error::Config(format!("face {}: tangential derivatives of g are missing", face.label()))
    })?;
    let normal = data.source_normal.as_ref().ok_or_else(|| {
        Error::Config(format!("face {}: normal derivatives of f are missing", face.label()))
    })?;
    let h = grid.h();
    let h2 = h * h;
    let k2 = problem.wavenumber * problem.wavenumber;
    let ntan = D - 1;
    Ok(grid
        .nodes()
        .filter(|&n| on_face(grid, n, face))
        .map(|node| {
            let p = grid.point(node);
            let g = (data.g)(p);
            let t = tangential(p);
            let s = normal(p);
            let sum_tt: T = t.g_tt[..ntan].iter().copied().sum();
            let sum_tttt: T = t.g_tttt[..ntan].iter().copied().sum();
            let sum_ntt: T = s.f_ntt[..ntan].iter().copied().sum();
            let two = T::from_f64(2.0);
            let second = s.f_n - k2 * g - sum_tt;
            let fourth = s.f_nnn - k2 * s.f_n - sum_ntt
                + k2 * k2 * g
                + two * k2 * sum_tt
                + sum_tttt
                + two * t.g_t1t1t2t2;
            let r = g + h2 / T::from_f64(6.0) * second + h2 * h2 / T::from_f64(120.0) * fourth;
            (node, r)
        })
        .collect())
}

pub fn neumann_ghost_rhs_2d<T: Real>(problem: &Problem2D<T>, grid: &Grid2D<T>, face: Face) -> Result<Vec<T>> {
    Ok(neumann_ghost_values(problem, grid, face)?.into_iter().map(|(_, r)| r).collect())
}

pub fn neumann_ghost_rhs_3d<T: Real>(problem: &Problem3D<T>, grid: &Grid3D<T>, face: Face) -> Result<Vec<T>> {
    Ok(neumann_ghost_values(problem, grid, face)?.into_iter().map(|(_, r)| r).collect())
}

/// Value substituted for the mirror node of a ghost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mirror<T> {
    Unknown(usize),
    Known(T),
}

/// `u_ghost = u_mirror + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhostElimination<T> {
    pub ghost: usize,
    pub mirror: Mirror<T>,
    pub offset: T,
}

/// A system whose columns `n..` refer to ghost values (`n + ghost id`).
#[derive(Clone, Debug)]
pub struct GhostSystem<T> {
    pub n: usize,
    pub ghosts: usize,
    pub rows: Vec<Vec<(usize, T)>>,
    pub rhs: Vec<T>,
}

/// Folds every ghost column into its mirror: the ghost coefficient is added
/// to the mirror column (or moved to the right side with the known mirror
/// value), and `coefficient * offset` is moved to the right side.
pub fn eliminate_ghosts<T: Real>(system: GhostSystem<T>, rules: &[GhostElimination<T>]) -> Result<SparseSystem<T>> {
    let mut by_ghost: Vec<Option<&GhostElimination<T>>> = vec![None; system.ghosts];
    for rule in rules {
        let slot = by_ghost
            .get_mut(rule.ghost)
            .ok_or_else(|| Error::Assembly(format!("elimination rule for unknown ghost {}", rule.ghost)))?;
        *slot = Some(rule);
    }
    let n = system.n;
    let mut rhs = system.rhs;
    let mut rows = Vec::with_capacity(n);
    for (r, row) in system.rows.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (c, w) in row {
            if c < n {
                out.push((c, w));
                continue;
            }
            let rule = by_ghost[c - n]
                .ok_or_else(|| Error::Assembly(format!("row {r} references ghost {} without an elimination rule", c - n)))?;
            match rule.mirror {
                Mirror::Unknown(m) => out.push((m, w)),
                Mirror::Known(v) => rhs[r] -= w * v,
            }
            rhs[r] -= w * rule.offset;
        }
        rows.push(out);
    }
    SparseSystem::new(CsrMatrix::from_rows(n, rows)?, rhs)
}

/// Ghost bookkeeping for assembly: assigns ids to ghost nodes as they are
/// first referenced and builds their elimination rules.
pub(crate) struct GhostLayer<T, const D: usize> {
    ids: HashMap<[isize; D], usize>,
    rules: Vec<GhostElimination<T>>,
    r_values: HashMap<[isize; D], T>,
    faces: Vec<Face>,
}

impl<T: Real, const D: usize> GhostLayer<T, D> {
    pub(crate) fn new(problem: &Problem<T, D>, grid: &Grid<T, D>) -> Result<Self> {
        let faces = problem.neumann_faces();
        let mut r_values = HashMap::new();
        for &f in &faces {
            r_values.extend(neumann_ghost_values(problem, grid, f)?);
        }
        Ok(GhostLayer {
            ids: HashMap::new(),
            rules: Vec::new(),
            r_values,
            faces,
        })
    }

    /// Column id (offset by `n`) for the ghost `node`, registering its rule.
    pub(crate) fn column(
        &mut self,
        node: [isize; D],
        grid: &Grid<T, D>,
        map: &GridIndexMap<D>,
        known: &NodeField<T, D>,
    ) -> Result<usize> {
        if let Some(&id) = self.ids.get(&node) {
            return Ok(map.len() + id);
        }
        let face = self
            .faces
            .iter()
            .copied()
            .find(|f| {
                let i = node[f.axis];
                match f.side {
                    Side::Low => i == -1,
                    Side::High => i == grid.cells()[f.axis] as isize + 1,
                }
            })
            .ok_or_else(|| Error::Assembly(format!("node {node:?} lies outside the grid off any Neumann face")))?;
        let a = face.axis;
        let boundary = match face.side {
            Side::Low => 0,
            Side::High => grid.cells()[a] as isize,
        };
        let mut mirror = node;
        mirror[a] = 2 * boundary - node[a];
        let mut foot = node;
        foot[a] = boundary;
        let r = *self
            .r_values
            .get(&foot)
            .ok_or_else(|| Error::Assembly(format!("no Neumann value at {foot:?}")))?;
        let two_h_r = T::from_f64(2.0) * grid.h() * r;
        let offset = match face.side {
            Side::Low => -two_h_r,
            Side::High => two_h_r,
        };
        let mirror = match map.row(mirror) {
            Some(c) => Mirror::Unknown(c),
            None => Mirror::Known(known.get(mirror)),
        };
        let id = self.rules.len();
        self.ids.insert(node, id);
        self.rules.push(GhostElimination { ghost: id, mirror, offset });
        Ok(map.len() + id)
    }

    pub(crate) fn into_rules(self) -> Vec<GhostElimination<T>> {
        self.rules
    }
}
