//! Structured polar meshing of the annulus and extraction of its boundary loops.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryLabel {
    GammaO,
    Sigma,
}

#[derive(Debug, Clone)]
pub struct AnnulusMesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<([usize; 2], BoundaryLabel)>,
    pub h: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub n_theta: usize,
    pub n_r: usize,
}

/// Closed polygonal interface, nodes ordered counterclockwise.
#[derive(Debug, Clone)]
pub struct InterfaceMesh {
    pub nodes: Vec<Point>,
    /// Unit normals per panel, pointing toward the origin.
    pub normals: Vec<Point>,
    pub lengths: Vec<f64>,
}

/// Target edge length for `ppw` points per wavelength at wavenumber `kappa_mesh`.
pub fn mesh_resolution(kappa_mesh: f64, points_per_wavelength: f64) -> Result<f64> {
    if !(kappa_mesh > 0.0 && points_per_wavelength > 0.0) {
        return Err(Error::InvalidInput(format!(
            "mesh_resolution needs positive arguments, got ({kappa_mesh}, {points_per_wavelength})"
        )));
    }
    Ok(2.0 * PI / (kappa_mesh * points_per_wavelength))
}

// Guards ceil against representation noise such as 2*pi*2 / (2*pi/200) = 400.0000000001.
fn tolerant_ceil(x: f64) -> usize {
    (x - 1e-9).ceil().max(1.0) as usize
}

pub fn build_annulus_mesh(r_in: f64, r_out: f64, h: f64) -> Result<AnnulusMesh> {
    if !(r_in > 0.0 && r_out > r_in && h > 0.0 && h < r_in) {
        return Err(Error::InvalidInput(format!(
            "annulus needs 0 < r_in < r_out and 0 < h < r_in, got ({r_in}, {r_out}, {h})"
        )));
    }
    let n_theta = tolerant_ceil(2.0 * PI * r_out / h);
    let n_r = tolerant_ceil((r_out - r_in) / h);
    if n_theta < 8 {
        return Err(Error::InvalidInput(format!("h = {h} gives only {n_theta} angular nodes")));
    }
    let mut vertices = Vec::with_capacity((n_r + 1) * n_theta);
    for k in 0..=n_r {
        let r = if k == n_r { r_out } else { r_in + k as f64 * (r_out - r_in) / n_r as f64 };
        for j in 0..n_theta {
            let t = 2.0 * PI * j as f64 / n_theta as f64;
            vertices.push([r * t.cos(), r * t.sin()]);
        }
    }
    let idx = |k: usize, j: usize| k * n_theta + (j % n_theta);
    let mut triangles = Vec::with_capacity(2 * n_r * n_theta);
    for k in 0..n_r {
        for j in 0..n_theta {
            let a = idx(k, j);
            let b = idx(k + 1, j);
            let c = idx(k + 1, j + 1);
            let d = idx(k, j + 1);
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary_edges = Vec::with_capacity(2 * n_theta);
    for j in 0..n_theta {
        boundary_edges.push(([idx(0, j), idx(0, j + 1)], BoundaryLabel::GammaO));
    }
    for j in 0..n_theta {
        boundary_edges.push(([idx(n_r, j), idx(n_r, j + 1)], BoundaryLabel::Sigma));
    }
    Ok(AnnulusMesh { vertices, triangles, boundary_edges, h, r_in, r_out, n_theta, n_r })
}

impl AnnulusMesh {
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Vertex indices carrying the given boundary label, in loop order.
    pub fn boundary_loop(&self, label: BoundaryLabel) -> Result<Vec<usize>> {
        let edges: Vec<[usize; 2]> = self.boundary_edges.iter().filter(|(_, l)| *l == label).map(|(e, _)| *e).collect();
        if edges.is_empty() {
            return Err(Error::InvalidMesh(format!("no {label:?} edges")));
        }
        let next: std::collections::HashMap<usize, usize> = edges.iter().map(|e| (e[0], e[1])).collect();
        if next.len() != edges.len() {
            return Err(Error::InvalidMesh(format!("{label:?} loop branches")));
        }
        let start = edges[0][0];
        let mut order = vec![start];
        let mut cur = start;
        loop {
            cur = *next.get(&cur).ok_or_else(|| Error::InvalidMesh(format!("{label:?} loop is open")))?;
            if cur == start {
                break;
            }
            if order.len() > edges.len() {
                return Err(Error::InvalidMesh(format!("{label:?} loop does not close")));
            }
            order.push(cur);
        }
        if order.len() != edges.len() {
            return Err(Error::InvalidMesh(format!("{label:?} edges form several loops")));
        }
        Ok(order)
    }

    /// Checks orientation, loop closure and that boundary vertices sit on their circles.
    pub fn validate(&self) -> Result<()> {
        for t in 0..self.triangles.len() {
            if self.signed_area(t) <= 0.0 {
                return Err(Error::InvalidMesh(format!("triangle {t} is not counterclockwise")));
            }
        }
        for (label, radius) in [(BoundaryLabel::GammaO, self.r_in), (BoundaryLabel::Sigma, self.r_out)] {
            for v in self.boundary_loop(label)? {
                let p = self.vertices[v];
                if (p[0].hypot(p[1]) - radius).abs() > 1e-12 {
                    return Err(Error::InvalidMesh(format!("vertex {v} off the {label:?} circle")));
                }
            }
        }
        Ok(())
    }

    /// Plain-text dump, one entity per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "vertex {i} {:.16e} {:.16e}", v[0], v[1]);
        }
        for (i, t) in self.triangles.iter().enumerate() {
            let _ = writeln!(s, "triangle {i} {} {} {}", t[0], t[1], t[2]);
        }
        for (e, l) in &self.boundary_edges {
            let _ = writeln!(s, "edge {} {} {l:?}", e[0], e[1]);
        }
        s
    }
}

/// Sigma nodes in counterclockwise order together with their vertex indices.
pub fn extract_interface(mesh: &AnnulusMesh) -> Result<(InterfaceMesh, Vec<usize>)> {
    let order = mesh.boundary_loop(BoundaryLabel::Sigma)?;
    let nodes: Vec<Point> = order.iter().map(|&v| mesh.vertices[v]).collect();
    let signed: f64 = (0..nodes.len())
        .map(|i| {
            let a = nodes[i];
            let b = nodes[(i + 1) % nodes.len()];
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    let (nodes, order) = if signed < 0.0 {
        (nodes.into_iter().rev().collect(), order.into_iter().rev().collect())
    } else {
        (nodes, order)
    };
    Ok((InterfaceMesh::from_nodes(nodes)?, order))
}

impl InterfaceMesh {
    /// Builds panels from a counterclockwise node loop.
    pub fn from_nodes(nodes: Vec<Point>) -> Result<Self> {
        let n = nodes.len();
        if n < 3 {
            return Err(Error::InvalidMesh("interface needs at least three nodes".into()));
        }
        let mut normals = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let a = nodes[i];
            let b = nodes[(i + 1) % n];
            let t = [b[0] - a[0], b[1] - a[1]];
            let len = t[0].hypot(t[1]);
            if len <= 0.0 {
                return Err(Error::InvalidMesh(format!("panel {i} is degenerate")));
            }
            lengths.push(len);
            normals.push([-t[1] / len, t[0] / len]);
        }
        Ok(Self { nodes, normals, lengths })
    }

    /// Regular polygon with `n` nodes inscribed in the circle of radius `r`.
    pub fn circle(r: f64, n: usize) -> Result<Self> {
        let nodes = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Self::from_nodes(nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panel(&self, p: usize) -> (Point, Point) {
        (self.nodes[p], self.nodes[(p + 1) % self.nodes.len()])
    }

    pub fn midpoint(&self, p: usize) -> Point {
        let (a, b) = self.panel(p);
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }

    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.nodes.iter().map(|p| p[1].atan2(p[0])).collect()
    }
}
