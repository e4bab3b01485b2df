//! Lattice simplices, their faces, and reduction to full-dimensional
//! coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// Largest vertex count accepted by [`LatticeSimplex::all_faces`].
pub const MAX_FACE_SWEEP_VERTICES: usize = 24;

/// A lattice simplex given by an ordered list of affinely independent
/// vertices in `Z^ambient_dim`.
///
/// Vertex order is significant: box points are indexed by vertex position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    ambient_dim: usize,
    vertices: Vec<Vec<BigInt>>,
}

impl LatticeSimplex {
    pub fn from_vertices(ambient_dim: usize, vertices: Vec<Vec<BigInt>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyVertexList);
        }
        for v in &vertices {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: v.len() });
            }
        }
        let n = vertices.len() - 1;
        if n > ambient_dim {
            return Err(Error::NotASimplex);
        }
        if n > 0 {
            let diffs = difference_matrix(&vertices);
            if rank(&diffs) != n {
                return Err(Error::NotASimplex);
            }
        }
        Ok(LatticeSimplex { ambient_dim, vertices })
    }

    /// Shorthand for tests and generators. Panics on invalid input.
    pub fn from_i64(ambient_dim: usize, vertices: &[&[i64]]) -> Result<Self> {
        let vertices = vertices.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_vertices(ambient_dim, vertices)
    }

    /// The standard simplex `conv(0, e_1, ..., e_d)` in `Z^d`.
    pub fn unit(dim: usize) -> Self {
        let mut vertices = vec![vec![BigInt::zero(); dim]];
        for i in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::one();
            vertices.push(e);
        }
        LatticeSimplex { ambient_dim: dim, vertices }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the simplex (vertex count minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[BigInt] {
        &self.vertices[i]
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Rewrites the simplex as a full-dimensional simplex in the lattice
    /// `aff(S) ∩ Z^ambient`, translated so the first vertex is the origin.
    ///
    /// Full-dimensional input is returned unchanged. Otherwise the
    /// difference vectors `v_i - v_0` are taken through a Smith
    /// decomposition `U D W = S`; the first `n` rows of `W^-1` are a basis of
    /// the saturated lattice, and the first `n` columns of `D W` are the
    /// coordinates of the differences in that basis.
    pub fn restrict_to_affine_lattice(&self) -> LatticeSimplex {
        if self.is_full_dimensional() {
            return self.clone();
        }
        let n = self.dim();
        if n == 0 {
            return LatticeSimplex { ambient_dim: 0, vertices: vec![Vec::new()] };
        }
        let diffs = difference_matrix(&self.vertices);
        let snf = linalg::smith_decompose(&diffs);
        let coords = diffs.mul(&snf.w).expect("shapes agree");
        let mut vertices = vec![vec![BigInt::zero(); n]];
        for i in 0..n {
            vertices.push(coords.row(i)[..n].to_vec());
        }
        LatticeSimplex { ambient_dim: n, vertices }
    }

    /// Matrix whose columns are the vertices extended by a trailing 1.
    /// Requires a full-dimensional simplex.
    pub fn homogenize(&self) -> Result<HomogenizedMatrix> {
        if !self.is_full_dimensional() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: self.ambient_dim });
        }
        let n = self.num_vertices();
        let mut m = IntMatrix::zeros(n, n);
        for (c, v) in self.vertices.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
            m[(n - 1, c)] = BigInt::one();
        }
        Ok(HomogenizedMatrix(m))
    }

    /// Normalized volume: `|det|` of the homogenized matrix of the
    /// restricted simplex.
    pub fn normalized_volume(&self) -> BigInt {
        let full = self.restrict_to_affine_lattice();
        full.homogenize().expect("restricted simplex is full-dimensional").volume()
    }

    /// The face on the selected vertices, restricted to its own affine
    /// lattice.
    pub fn face(&self, sel: &FaceSelector) -> Result<LatticeSimplex> {
        if let Some(&bad) = sel.indices.iter().find(|&&i| i >= self.num_vertices()) {
            return Err(Error::IndexOutOfRange { index: bad, len: self.num_vertices() });
        }
        let vertices = sel.indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let raw = LatticeSimplex { ambient_dim: self.ambient_dim, vertices };
        Ok(raw.restrict_to_affine_lattice())
    }

    /// Every nonempty face, ordered by size and then lexicographically by
    /// vertex indices.
    pub fn all_faces(&self) -> Result<Faces<'_>> {
        let n = self.num_vertices();
        if n > MAX_FACE_SWEEP_VERTICES {
            return Err(Error::TooManyFaces { vertices: n, limit: MAX_FACE_SWEEP_VERTICES });
        }
        Ok(Faces { simplex: self, current: Some(vec![0]) })
    }

    /// Reorders the vertices: vertex `i` of the result is vertex `perm[i]`
    /// of `self`.
    pub fn permute_vertices(&self, perm: &[usize]) -> Result<LatticeSimplex> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::LengthMismatch(perm.len(), n));
        }
        for &p in perm {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, len: n });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::DuplicateIndex(p));
            }
        }
        Ok(LatticeSimplex {
            ambient_dim: self.ambient_dim,
            vertices: perm.iter().map(|&p| self.vertices[p].clone()).collect(),
        })
    }
}

impl fmt::Debug for LatticeSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeSimplex(dim {}, ambient {}, [", self.dim(), self.ambient_dim)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "])")
    }
}

fn difference_matrix(vertices: &[Vec<BigInt>]) -> IntMatrix {
    let base = &vertices[0];
    let rows = vertices[1..].iter().map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    IntMatrix::from_rows(rows).expect("vertices share a length")
}

fn rank(m: &IntMatrix) -> usize {
    let (h, _) = linalg::hermite_normal_form(m);
    (0..h.rows()).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count()
}

/// Square homogenized vertex matrix of a full-dimensional simplex: column
/// `i` is `(v_i, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogenizedMatrix(IntMatrix);

impl HomogenizedMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.0).expect("square")
    }

    /// `|det|`, the normalized volume.
    pub fn volume(&self) -> BigInt {
        self.det().abs()
    }
}

/// A nonempty set of vertex indices, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceSelector {
    indices: Vec<usize>,
}

impl FaceSelector {
    pub fn new(mut indices: Vec<usize>, num_vertices: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySelector);
        }
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= num_vertices {
                return Err(Error::IndexOutOfRange { index: last, len: num_vertices });
            }
        }
        Ok(FaceSelector { indices })
    }

    pub fn full(num_vertices: usize) -> Self {
        FaceSelector { indices: (0..num_vertices).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Selector of `face(face(S, self), inner)` expressed against `S`.
    pub fn compose(&self, inner: &FaceSelector) -> Result<FaceSelector> {
        let indices = inner
            .indices
            .iter()
            .map(|&i| self.indices.get(i).copied().ok_or(Error::IndexOutOfRange { index: i, len: self.indices.len() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FaceSelector { indices })
    }
}

/// Iterator returned by [`LatticeSimplex::all_faces`].
pub struct Faces<'a> {
    simplex: &'a LatticeSimplex,
    current: Option<Vec<usize>>,
}

impl Iterator for Faces<'_> {
    type Item = (FaceSelector, LatticeSimplex);

    fn next(&mut self) -> Option<Self::Item> {
        let indices = self.current.take()?;
        self.current = next_subset(&indices, self.simplex.num_vertices());
        let sel = FaceSelector { indices };
        let face = self.simplex.face(&sel).expect("indices in range");
        Some((sel, face))
    }
}

/// Next subset in (size, lexicographic) order.
fn next_subset(cur: &[usize], n: usize) -> Option<Vec<usize>> {
    let k = cur.len();
    let mut next = cur.to_vec();
    for pos in (0..k).rev() {
        if next[pos] < n - (k - pos) {
            next[pos] += 1;
            for j in pos + 1..k {
                next[j] = next[j - 1] + 1;
            }
            return Some(next);
        }
    }
    (k < n).then(|| (0..=k).collect())
}
