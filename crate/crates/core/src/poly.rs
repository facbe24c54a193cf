//! Dense univariate polynomials over a [`Field`], just enough machinery for
//! symbolic folded-Wronskian determinants.

use crate::gf::{FElem, Field};
use crate::linalg::FMatrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPoly {
    field: Field,
    /// coefficients low-to-high, no trailing zeros
    coeffs: Vec<FElem>,
}

impl FPoly {
    pub fn zero(field: &Field) -> FPoly {
        FPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<FElem>) -> FPoly {
        let mut p = FPoly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &FPoly) -> FPoly {
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).copied().unwrap_or(FElem::ZERO);
            let b = other.coeffs.get(i).copied().unwrap_or(FElem::ZERO);
            out.push(f.add(a, b));
        }
        FPoly::from_coeffs(f, out)
    }

    pub fn sub(&self, other: &FPoly) -> FPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FPoly {
        let f = &self.field;
        FPoly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, other: &FPoly) -> FPoly {
        if self.is_zero() || other.is_zero() {
            return FPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![FElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FPoly::from_coeffs(f, out)
    }

    /// Number of leading zero coefficients (the multiplicity of the root 0);
    /// None for the zero polynomial.
    pub fn x_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides out the maximal power of x.
    pub fn strip_x_power(&self) -> FPoly {
        match self.x_valuation() {
            None => FPoly::zero(&self.field),
            Some(v) => FPoly::from_coeffs(&self.field, self.coeffs[v..].to_vec()),
        }
    }

    pub fn eval(&self, x: FElem) -> FElem {
        let f = &self.field;
        let mut acc = FElem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion; fine
/// for the r <= 4 sizes the Wronskian oracle uses.
pub fn poly_det(field: &Field, mat: &[Vec<FPoly>]) -> FPoly {
    let n = mat.len();
    if n == 0 {
        return FPoly::from_coeffs(field, vec![FElem::ONE]);
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = FPoly::zero(field);
    for j in 0..n {
        if mat[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<FPoly>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| mat[i][c].clone()).collect())
            .collect();
        let term = mat[0][j].mul(&poly_det(field, &minor));
        det = if j % 2 == 0 { det.add(&term) } else { det.sub(&term) };
    }
    det
}

/// The symbolic r x r product Wr_{r,omega}(x) * M for M in F^{n x r}: entry
/// (i, c) is the polynomial sum_j omega^{ij} M[j][c] x^j.
pub fn wronskian_times_matrix(field: &Field, omega: FElem, r: usize, m: &FMatrix) -> Vec<Vec<FPoly>> {
    let n = m.rows();
    (0..r)
        .map(|i| {
            (0..m.cols())
                .map(|c| {
                    let coeffs: Vec<FElem> = (0..n)
                        .map(|j| field.mul(field.pow(omega, (i * j) as u64), m.get(j, c)))
                        .collect();
                    FPoly::from_coeffs(field, coeffs)
                })
                .collect()
        })
        .collect()
}
