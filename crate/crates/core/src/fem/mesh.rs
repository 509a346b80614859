use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::geometry::DiskGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshKind {
    Beam1d,
    PlaneStress2d,
}

impl MeshKind {
    fn nodes_per_element(self) -> usize {
        match self {
            MeshKind::Beam1d => 2,
            MeshKind::PlaneStress2d => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            MeshKind::Beam1d => "beam_1d",
            MeshKind::PlaneStress2d => "plane_stress_2d",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<Vec<usize>>,
    kind: MeshKind,
}

impl Mesh {
    pub fn new(nodes: Vec<[f64; 2]>, elements: Vec<Vec<usize>>, kind: MeshKind) -> Result<Self> {
        let arity = kind.nodes_per_element();
        let mesh = Self {
            nodes,
            elements,
            kind,
        };
        for (e, conn) in mesh.elements.iter().enumerate() {
            if conn.len() != arity {
                return Err(invariant(
                    "elements",
                    format!("element {e} has {} nodes, expected {arity}", conn.len()),
                ));
            }
            if let Some(&bad) = conn.iter().find(|&&i| i >= mesh.nodes.len()) {
                return Err(invariant(
                    "elements",
                    format!("element {e} references node {bad} out of range"),
                ));
            }
            let size = mesh.element_size(e);
            if !(size.abs() > 0.0) {
                return Err(invariant("elements", format!("element {e} is degenerate")));
            }
        }
        Ok(mesh)
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    /// Length of a beam element or signed area of a triangle.
    pub fn element_size(&self, e: usize) -> f64 {
        let c = &self.elements[e];
        match self.kind {
            MeshKind::Beam1d => {
                let (a, b) = (self.nodes[c[0]], self.nodes[c[1]]);
                (b[0] - a[0]).hypot(b[1] - a[1])
            }
            MeshKind::PlaneStress2d => {
                let (a, b, d) = (self.nodes[c[0]], self.nodes[c[1]], self.nodes[c[2]]);
                0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]))
            }
        }
    }

    pub fn total_size(&self) -> f64 {
        (0..self.elements.len()).map(|e| self.element_size(e)).sum()
    }

    /// Nodes on the outer circle of a disk mesh (radius within 1e-9·R of the maximum).
    pub fn rim_nodes(&self) -> Vec<usize> {
        let r_max = self
            .nodes
            .iter()
            .map(|p| p[0].hypot(p[1]))
            .fold(0.0, f64::max);
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i][0].hypot(self.nodes[i][1]) >= r_max * (1.0 - 1e-9))
            .collect()
    }

    /// Plain-text export:
    ///
    /// ```text
    /// # resokit mesh v1
    /// kind <beam_1d|plane_stress_2d>
    /// nodes <count>
    /// <index> <x> <y>
    /// elements <count>
    /// <index> <node> <node> [<node>]
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# resokit mesh v1").unwrap();
        writeln!(out, "kind {}", self.kind.label()).unwrap();
        writeln!(out, "nodes {}", self.nodes.len()).unwrap();
        for (i, p) in self.nodes.iter().enumerate() {
            writeln!(out, "{i} {:e} {:e}", p[0], p[1]).unwrap();
        }
        writeln!(out, "elements {}", self.elements.len()).unwrap();
        for (e, conn) in self.elements.iter().enumerate() {
            let list: Vec<String> = conn.iter().map(|n| n.to_string()).collect();
            writeln!(out, "{e} {}", list.join(" ")).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Schema(format!("mesh text: {msg}"));
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated"))?;
            line.strip_prefix(key)
                .map(|v| v.trim().to_string())
                .ok_or_else(|| bad(&format!("expected `{key}`")))
        };
        let kind = match header("kind")?.as_str() {
            "beam_1d" => MeshKind::Beam1d,
            "plane_stress_2d" => MeshKind::PlaneStress2d,
            other => return Err(bad(&format!("unknown kind {other}"))),
        };
        let n_nodes: usize = header("nodes")?.parse().map_err(|_| bad("node count"))?;
        let mut nodes = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            let line = header("")?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("node line"));
            }
            let x = f[1].parse().map_err(|_| bad("node x"))?;
            let y = f[2].parse().map_err(|_| bad("node y"))?;
            nodes.push([x, y]);
        }
        let n_elems: usize = header("elements")?
            .parse()
            .map_err(|_| bad("element count"))?;
        let mut elements = Vec::with_capacity(n_elems);
        for _ in 0..n_elems {
            let line = header("")?;
            let conn = line
                .split_whitespace()
                .skip(1)
                .map(|v| v.parse().map_err(|_| bad("connectivity")))
                .collect::<Result<Vec<usize>>>()?;
            elements.push(conn);
        }
        Mesh::new(nodes, elements, kind)
    }
}

/// Uniform 1D mesh of `n_elements` beam elements along x.
pub fn mesh_beam(length: f64, n_elements: usize) -> Result<Mesh> {
    if n_elements < 2 {
        return Err(invariant(
            "n_elements",
            format!("need at least 2, got {n_elements}"),
        ));
    }
    let h = length / n_elements as f64;
    let nodes = (0..=n_elements).map(|i| [i as f64 * h, 0.0]).collect();
    let elements = (0..n_elements).map(|i| vec![i, i + 1]).collect();
    Mesh::new(nodes, elements, MeshKind::Beam1d)
}

/// Structured polar triangulation of a disk.
///
/// `⌈R/target_edge⌉` equally spaced rings; ring `i` carries `6i` nodes so
/// edges stay close to `target_edge` everywhere. Adjacent rings are
/// stitched by merging their angular sequences, giving `12i − 6` triangles
/// per annulus and `6N²` triangles in total. Nodes are numbered ring by
/// ring from the centre, which keeps the stiffness profile narrow. Rim
/// nodes lie exactly on the circle.
pub fn mesh_disk(geom: &DiskGeometry, target_edge: f64) -> Result<Mesh> {
    let radius = geom.radius();
    if !(target_edge > 0.0 && target_edge < radius / 4.0) {
        return Err(invariant(
            "target_edge",
            format!(
                "must lie in (0, R/4) = (0, {:e}), got {target_edge:e}",
                radius / 4.0
            ),
        ));
    }
    let rings = (radius / target_edge).ceil() as usize;
    let mut nodes = vec![[0.0, 0.0]];
    let mut ring_ids: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..=rings {
        let count = 6 * i;
        let r = radius * i as f64 / rings as f64;
        let ids = (0..count)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / count as f64;
                nodes.push([r * a.cos(), r * a.sin()]);
                nodes.len() - 1
            })
            .collect();
        ring_ids.push(ids);
    }

    let mut elements = Vec::with_capacity(6 * rings * rings);
    for i in 1..=rings {
        let inner = &ring_ids[i - 1];
        let outer = &ring_ids[i];
        let (ni, no) = (inner.len(), outer.len());
        if i == 1 {
            for j in 0..no {
                elements.push(vec![0, outer[j], outer[(j + 1) % no]]);
            }
            continue;
        }
        let (mut a, mut b) = (0, 0);
        while a < ni || b < no {
            // advance whichever ring's next node comes first in angle
            let next_inner = (a + 1) as f64 / ni as f64;
            let next_outer = (b + 1) as f64 / no as f64;
            if b < no && (a >= ni || next_outer <= next_inner) {
                elements.push(vec![inner[a % ni], outer[b], outer[(b + 1) % no]]);
                b += 1;
            } else {
                elements.push(vec![inner[a], outer[b % no], inner[(a + 1) % ni]]);
                a += 1;
            }
        }
    }
    Mesh::new(nodes, elements, MeshKind::PlaneStress2d)
}
