//! Antisymmetrizers, the Levi-Civita tensor, and the implicit three-vector
//! tensor formats.
//!
//! A cubical tensor is antisymmetric when its entries flip sign under any
//! transposition of two indices. The antisymmetrizer is the orthogonal
//! projection onto that subspace; applied to a rank-1 tensor it produces the
//! rank-at-most-6 format represented by [`A6Repr`]. The partial variant flips
//! sign only under transposition of the first two modes and leads to the
//! rank-2 format [`C2Repr`].

use crate::error::{Error, Result};
use crate::tensor::{Tensor3, Vector};

/// The 3x3x3 Levi-Civita tensor: +1 on even permutations of (1,2,3),
/// -1 on odd permutations, 0 otherwise.
pub fn levi_civita() -> Tensor3 {
    let mut e = Tensor3::zeros((3, 3, 3));
    e.set(0, 1, 2, 1.0);
    e.set(1, 2, 0, 1.0);
    e.set(2, 0, 1, 1.0);
    e.set(0, 2, 1, -1.0);
    e.set(1, 0, 2, -1.0);
    e.set(2, 1, 0, -1.0);
    e
}

/// Orthogonal projection of a cubical tensor onto the antisymmetric
/// subspace: the signed average over all six index permutations. Each
/// signed average is computed once per sorted index triple and mirrored,
/// so the result satisfies the permutation identities exactly (entries
/// with a repeated index are exactly zero).
pub fn antisymmetrize(b: &Tensor3) -> Result<Tensor3> {
    if !b.is_cubical() {
        return Err(Error::NotCubical { dims: b.dims() });
    }
    let n = b.dims().0;
    let mut a = Tensor3::zeros(b.dims());
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let v = (b.get(i, j, k) + b.get(j, k, i) + b.get(k, i, j)
                    - b.get(i, k, j)
                    - b.get(j, i, k)
                    - b.get(k, j, i))
                    / 6.0;
                a.set(i, j, k, v);
                a.set(j, k, i, v);
                a.set(k, i, j, v);
                a.set(i, k, j, -v);
                a.set(j, i, k, -v);
                a.set(k, j, i, -v);
            }
        }
    }
    Ok(a)
}

/// Projection onto tensors antisymmetric in modes 1 and 2:
/// `c_ijk = (b_ijk - b_jik) / 2`. Requires the first two dimensions to
/// agree. Computed once per sorted index pair and mirrored, so every
/// frontal slice is exactly skew-symmetric.
pub fn antisymmetrize_partial(b: &Tensor3) -> Result<Tensor3> {
    let (n1, n2, n3) = b.dims();
    if n1 != n2 {
        return Err(Error::NotSquareSlices { n1, n2 });
    }
    let mut c = Tensor3::zeros(b.dims());
    for k in 0..n3 {
        for i in 0..n1 {
            for j in (i + 1)..n2 {
                let v = (b.get(i, j, k) - b.get(j, i, k)) / 2.0;
                c.set(i, j, k, v);
                c.set(j, i, k, -v);
            }
        }
    }
    Ok(c)
}

/// True when all six permutation identities hold within
/// `tol * max(1, norm)`. Non-cubical tensors are never antisymmetric.
pub fn is_antisymmetric(t: &Tensor3, tol: f64) -> bool {
    if !t.is_cubical() {
        return false;
    }
    let n = t.dims().0;
    let scale = tol * t.norm().max(1.0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = t.get(i, j, k);
                if (a - t.get(j, k, i)).abs() > scale
                    || (a - t.get(k, i, j)).abs() > scale
                    || (a + t.get(i, k, j)).abs() > scale
                    || (a + t.get(j, i, k)).abs() > scale
                    || (a + t.get(k, j, i)).abs() > scale
                {
                    return false;
                }
            }
        }
    }
    true
}

/// True when `c_ijk = -c_jik` holds within `tol * max(1, norm)`, i.e. every
/// frontal slice is skew-symmetric.
pub fn is_partially_antisymmetric(t: &Tensor3, tol: f64) -> bool {
    let (n1, n2, n3) = t.dims();
    if n1 != n2 {
        return false;
    }
    let scale = tol * t.norm().max(1.0);
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                if (t.get(i, j, k) + t.get(j, i, k)).abs() > scale {
                    return false;
                }
            }
        }
    }
    true
}

/// Implicit representation of the antisymmetric tensor built from three
/// vectors of common length: the antisymmetrization of their outer product,
///
/// ```text
/// (x o y o z + y o z o x + z o x o y - x o z o y - y o x o z - z o y o x) / 6
/// ```
///
/// Its materialization has rank at most 6 for any size. The vectors are
/// stored exactly as given; no canonicalization happens at construction.
#[derive(Clone, Debug)]
pub struct A6Repr {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
}

impl A6Repr {
    pub fn new(x: Vector, y: Vector, z: Vector) -> Result<Self> {
        if x.len() != y.len() || y.len() != z.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: if x.len() != y.len() { y.len() } else { z.len() },
            });
        }
        Ok(Self { x, y, z })
    }

    /// Common vector length.
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Dense tensor represented by the three vectors, accumulated directly
    /// from the six signed terms.
    pub fn materialize(&self) -> Tensor3 {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        Tensor3::from_fn((x.len(), x.len(), x.len()), |i, j, k| {
            (x[i] * y[j] * z[k] + y[i] * z[j] * x[k] + z[i] * x[j] * y[k]
                - x[i] * z[j] * y[k]
                - y[i] * x[j] * z[k]
                - z[i] * y[j] * x[k])
                / 6.0
        })
    }
}

/// Implicit representation of the tensor antisymmetric in modes 1 and 2
/// built from vectors `x, y` of length `n` and `z` of length `m`:
/// `(x o y o z - y o x o z) / 2`. Its materialization has rank 2 whenever
/// `x, y` are independent and `z` is nonzero.
#[derive(Clone, Debug)]
pub struct C2Repr {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
}

impl C2Repr {
    pub fn new(x: Vector, y: Vector, z: Vector) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        Ok(Self { x, y, z })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.z.len()
    }

    pub fn materialize(&self) -> Tensor3 {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        Tensor3::from_fn((x.len(), x.len(), z.len()), |i, j, k| {
            (x[i] * y[j] - y[i] * x[j]) * z[k] / 2.0
        })
    }
}
