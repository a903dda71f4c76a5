use std::fmt::Write;

use super::{SurfaceEntry, SurfaceKind};

/// Default clipping range in `z` for cones and hyperboloids.
pub const DEFAULT_Z_RANGE: (f64, f64) = (-2.0, 2.0);

/// Triangle mesh of a surface of revolution; the axis entry degenerates to a
/// polyline.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub polylines: Vec<Vec<usize>>,
}

impl TriangleMesh {
    /// Appends `other`, shifting its indices.
    pub fn append(&mut self, other: &TriangleMesh) {
        let off = self.vertices.len();
        self.vertices.extend_from_slice(&other.vertices);
        self.triangles
            .extend(other.triangles.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
        self.polylines
            .extend(other.polylines.iter().map(|l| l.iter().map(|i| i + off).collect()));
    }

    /// Wavefront OBJ text: `v` records, then `f` (1-based triangles) and `l`
    /// records.
    pub fn to_obj(&self, fmt_float: impl Fn(f64) -> String) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", fmt_float(v[0]), fmt_float(v[1]), fmt_float(v[2]));
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        for l in &self.polylines {
            let idx: Vec<String> = l.iter().map(|i| (i + 1).to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
        s
    }
}

/// Triangulates `a²(x²+y²) − (z−b)² = c²` over `n_u` angles and `n_v`
/// heights in `z_range`. Angles wrap around, so every interior edge is
/// shared by two triangles.
pub fn surface_mesh(entry: &SurfaceEntry, n_u: usize, n_v: usize, z_range: (f64, f64)) -> TriangleMesh {
    let n_u = n_u.max(3);
    let n_v = n_v.max(2);
    let (z0, z1) = z_range;
    let mut mesh = TriangleMesh::default();
    match entry.kind {
        SurfaceKind::Axis => {
            for j in 0..n_v {
                let z = z0 + (z1 - z0) * j as f64 / (n_v - 1) as f64;
                mesh.vertices.push([0.0, 0.0, z]);
            }
            mesh.polylines.push((0..n_v).collect());
            return mesh;
        }
        SurfaceKind::HorizontalStar => {
            let r_max = z1.abs().max(z0.abs());
            grid(&mut mesh, n_u, n_v, |j| {
                let r = r_max * j as f64 / (n_v - 1) as f64;
                (r, 0.0)
            });
        }
        SurfaceKind::Cone | SurfaceKind::Hyperboloid => {
            let (a, b, c) = (entry.a, entry.b, entry.c);
            grid(&mut mesh, n_u, n_v, |j| {
                let z = z0 + (z1 - z0) * j as f64 / (n_v - 1) as f64;
                (((z - b).powi(2) + c * c).sqrt() / a, z)
            });
        }
    }
    mesh
}

fn grid(mesh: &mut TriangleMesh, n_u: usize, n_v: usize, ring: impl Fn(usize) -> (f64, f64)) {
    for j in 0..n_v {
        let (r, z) = ring(j);
        for i in 0..n_u {
            let phi = std::f64::consts::TAU * i as f64 / n_u as f64;
            mesh.vertices.push([r * phi.cos(), r * phi.sin(), z]);
        }
    }
    let idx = |i: usize, j: usize| j * n_u + (i % n_u);
    for j in 0..n_v - 1 {
        for i in 0..n_u {
            mesh.triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            mesh.triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
}
