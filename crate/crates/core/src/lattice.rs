//! Positive-definite even lattices: validation, dual vectors, the
//! discriminant group `L°/L` with canonical coset representatives.

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::LatticeError;
use crate::intmat::{self, Int, Rat};

/// A positive-definite even integral lattice, fixed by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    rank: usize,
    gram: Vec<Vec<Int>>,
    gram_inv: Vec<Vec<Rat>>,
}

/// A vector of `L°` (or of the ambient rational span), in lattice-basis
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualVector {
    pub coords: Vec<Rat>,
}

impl DualVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        DualVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DualVector {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        DualVector {
            coords: coords.iter().map(|&c| Rat::from(Int::from(c))).collect(),
        }
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        DualVector {
            coords: coords.iter().map(|&(n, d)| intmat::rat(n, d)).collect(),
        }
    }

    pub fn add(&self, other: &DualVector) -> DualVector {
        DualVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> DualVector {
        DualVector {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, when the vector lies in `L`.
    pub fn integer_coords(&self) -> Option<Vec<Int>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// `L°/L` with its invariant factors and a canonical transversal.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<Int>,
    pub reps: Vec<DualVector>,
    pub order: Int,
    // Smith data used for canonicalization: u * gram * v = diag
    smith_u: Vec<Vec<Int>>,
    smith_u_inv: Vec<Vec<Rat>>,
    smith_diag: Vec<Int>,
}

/// JSON ingestion format: `{"gram": [[...]]}`.
#[derive(Debug, Deserialize)]
pub struct LatticeFile {
    pub gram: Vec<Vec<i64>>,
}

/// Checks symmetry, even diagonal and positive-definiteness.
pub fn validate_lattice(gram: &[Vec<Int>]) -> Result<Lattice, LatticeError> {
    let d = gram.len();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != d {
            return Err(LatticeError::NotSymmetric(i, row.len().min(d)));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            if gram[i][j] != gram[j][i] {
                return Err(LatticeError::NotSymmetric(i, j));
            }
        }
    }
    for i in 0..d {
        if (&gram[i][i] % BigInt::from(2)).abs() == BigInt::one() {
            return Err(LatticeError::NotEven(i));
        }
    }
    for (k, minor) in intmat::leading_minors(gram).iter().enumerate() {
        if !minor.is_positive() {
            return Err(LatticeError::NotPositiveDefinite(k + 1));
        }
    }
    let gram_inv = intmat::rational_inverse(gram).expect("positive-definite matrix is invertible");
    Ok(Lattice {
        rank: d,
        gram: gram.to_vec(),
        gram_inv,
    })
}

pub fn validate_lattice_i64(gram: &[Vec<i64>]) -> Result<Lattice, LatticeError> {
    let g: Vec<Vec<Int>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    validate_lattice(&g)
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<Int>] {
        &self.gram
    }

    pub fn gram_inv(&self) -> &[Vec<Rat>] {
        &self.gram_inv
    }

    pub fn det(&self) -> Int {
        intmat::bareiss_det(&self.gram)
    }

    /// `uᵀ G v`, exact.
    pub fn inner_product(&self, u: &DualVector, v: &DualVector) -> Result<Rat, LatticeError> {
        for w in [u, v] {
            if w.coords.len() != self.rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: self.rank,
                    got: w.coords.len(),
                });
            }
        }
        let gv = intmat::mat_vec_rat(&self.gram, &v.coords);
        Ok(u.coords.iter().zip(&gv).map(|(a, b)| a * b).sum())
    }

    /// Norm `⟨v, v⟩`.
    pub fn norm(&self, v: &DualVector) -> Result<Rat, LatticeError> {
        self.inner_product(v, v)
    }

    /// Membership test for the dual lattice: `G v` integral.
    pub fn in_dual(&self, v: &DualVector) -> Result<bool, LatticeError> {
        if v.coords.len() != self.rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank,
                got: v.coords.len(),
            });
        }
        Ok(intmat::mat_vec_rat(&self.gram, &v.coords)
            .iter()
            .all(|c| c.is_integer()))
    }

    /// Discriminant group via the Smith normal form of the Gram matrix.
    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let (u, dmat, _v) = intmat::smith_normal_form(&self.gram);
        let diag: Vec<Int> = (0..self.rank).map(|i| dmat[i][i].clone()).collect();
        let u_inv = intmat::rational_inverse(&u).expect("unimodular");
        let order: Int = diag.iter().product();
        debug_assert_eq!(order.abs(), self.det().abs());

        let invariant_factors: Vec<Int> =
            diag.iter().filter(|d| **d > Int::one()).cloned().collect();

        let group = DiscriminantGroup {
            invariant_factors,
            reps: Vec::new(),
            order: order.clone(),
            smith_u: u,
            smith_u_inv: u_inv,
            smith_diag: diag,
        };
        let mut reps = Vec::new();
        let mut smith_coords = vec![Int::zero(); self.rank];
        loop {
            reps.push(group.from_smith_coords(self, &smith_coords));
            // mixed-radix increment, last coordinate fastest
            let mut carry = true;
            for i in (0..self.rank).rev() {
                if !carry {
                    break;
                }
                smith_coords[i] += 1;
                if smith_coords[i] >= group.smith_diag[i] {
                    smith_coords[i] = Int::zero();
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        DiscriminantGroup { reps, ..group }
    }
}

impl DiscriminantGroup {
    /// Canonical dual vector with Smith coordinates `s` (each in `[0, dᵢ)`).
    fn from_smith_coords(&self, lat: &Lattice, s: &[Int]) -> DualVector {
        let s_rat: Vec<Rat> = s.iter().map(|x| Rat::from(x.clone())).collect();
        // w = U⁻¹ s (integer vector), coords = G⁻¹ w
        let w: Vec<Rat> = (0..lat.rank)
            .map(|i| {
                self.smith_u_inv[i]
                    .iter()
                    .zip(&s_rat)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        let coords: Vec<Rat> = (0..lat.rank)
            .map(|i| lat.gram_inv[i].iter().zip(&w).map(|(a, b)| a * b).sum())
            .collect();
        DualVector { coords }
    }

    /// The unique canonical representative of `v + L`.
    pub fn canonicalize(&self, lat: &Lattice, v: &DualVector) -> Result<DualVector, LatticeError> {
        let w = intmat::mat_vec_rat(lat.gram(), &v.coords);
        let w_int: Vec<Int> = w
            .iter()
            .map(|c| {
                c.is_integer()
                    .then(|| c.to_integer())
                    .ok_or(LatticeError::NotInDualLattice)
            })
            .collect::<Result<_, _>>()?;
        let s: Vec<Int> = (0..lat.rank)
            .map(|i| {
                let raw: Int = self.smith_u[i]
                    .iter()
                    .zip(&w_int)
                    .map(|(a, b)| a * b)
                    .sum();
                let m = &self.smith_diag[i];
                ((raw % m) + m) % m
            })
            .collect();
        Ok(self.from_smith_coords(lat, &s))
    }

    /// Index of a canonical representative inside `reps`.
    pub fn index_of(&self, rep: &DualVector) -> Option<usize> {
        self.reps.iter().position(|r| r == rep)
    }

    pub fn order_usize(&self) -> usize {
        self.order.to_usize().expect("discriminant order fits usize")
    }
}

/// Standard Gram matrix of the `E₈` root lattice.
pub fn e8_gram() -> Vec<Vec<Int>> {
    let rows: [[i64; 8]; 8] = [
        [2, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0],
        [0, -1, 2, -1, 0, 0, 0, 0],
        [0, 0, -1, 2, -1, 0, 0, 0],
        [0, 0, 0, -1, 2, -1, 0, -1],
        [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0],
        [0, 0, 0, 0, -1, 0, 0, 2],
    ];
    rows.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}
