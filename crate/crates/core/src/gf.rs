//! Exact arithmetic in F_p and F_{p^k}.
//!
//! A [`Field`] is a runtime descriptor: characteristic `p`, extension degree
//! `k`, and (for `k >= 2`) a monic irreducible modulus over F_p. Elements are
//! stored as canonical indices in `[0, q)`, the base-p encoding of their
//! coefficient vector in the polynomial basis `1, z, ..., z^{k-1}`, so
//! equality is structural and serialization is deterministic. All arithmetic
//! goes through the owning [`Field`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default upper bound on the field order `q = p^k`. Exhaustive routines all
/// over the crate assume desk scale; the ceiling guards them.
pub const DEFAULT_ORDER_CEILING: u128 = 1 << 20;

/// An element of a [`Field`], stored as its canonical index in `[0, q)`.
///
/// The index encodes the coefficient vector low-to-high: an element
/// `c_0 + c_1 z + ... + c_{k-1} z^{k-1}` has index `sum c_i p^i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FElem(pub u64);

impl FElem {
    pub const ZERO: FElem = FElem(0);
    pub const ONE: FElem = FElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct FieldData {
    p: u64,
    k: u32,
    q: u64,
    /// Monic irreducible modulus, coefficients low-to-high including the
    /// leading 1; empty when k = 1.
    modulus: Vec<u64>,
}

/// A prime or prime-power finite field F_{p^k} with explicit presentation.
///
/// Cheap to clone (shared descriptor) and immutable after construction, so
/// values are safe to share across verifier shards.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiplies two polynomials over F_p and reduces by the monic `modulus`
/// (coefficients low-to-high, length k+1).
fn polymul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for i in (k..2 * k - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            if modulus[j] != 0 {
                prod[i - k + j] = (prod[i - k + j] + c * (p - modulus[j])) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

/// True iff the monic polynomial (coefficients low-to-high, leading 1) has no
/// monic divisor of degree in `1..=deg/2`. Trial division over all monic
/// candidate divisors; desk scale keeps this cheap.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if poly[0] == 0 {
        // divisible by x
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut divisor = decode_digits(idx, p, d);
            divisor.push(1);
            if poly_divides(&divisor, poly, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(divisor: &[u64], poly: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for j in 0..=dd {
                let sub = lead * divisor[j] % p;
                let pos = shift + j;
                rem[pos] = (rem[pos] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

fn decode_digits(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % p);
        idx /= p;
    }
    out
}

impl Field {
    /// Constructs F_{p^k} with the lexicographically smallest monic
    /// irreducible modulus (coefficients compared low-degree-first), under the
    /// default order ceiling. Deterministic: same inputs give an identical
    /// presentation.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        Field::with_ceiling(p, k, DEFAULT_ORDER_CEILING)
    }

    /// Same as [`Field::new`] with an explicit order ceiling.
    pub fn with_ceiling(p: u64, k: u32, ceiling: u128) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::InvalidParams("extension degree k must be >= 1".into()));
        }
        let q = (p as u128).pow(k);
        if q > ceiling {
            return Err(Error::SizeCeiling { q, ceiling });
        }
        let q = q as u64;
        let modulus = if k == 1 {
            Vec::new()
        } else {
            let mut found = None;
            // lexicographic by (c_0, c_1, ..., c_{k-1}); the encoding below
            // enumerates c_0 slowest so plain index order is wrong -- walk
            // coefficient vectors explicitly.
            let mut coeffs = vec![0u64; k as usize];
            'outer: loop {
                let mut candidate = coeffs.clone();
                candidate.push(1);
                if is_irreducible(&candidate, p) {
                    found = Some(candidate);
                    break;
                }
                // next vector in low-degree-first lexicographic order
                for pos in (0..k as usize).rev() {
                    coeffs[pos] += 1;
                    if coeffs[pos] < p {
                        continue 'outer;
                    }
                    coeffs[pos] = 0;
                }
                break;
            }
            match found {
                Some(m) => m,
                None => return Err(Error::NoIrreducible { p, k }),
            }
        };
        Ok(Field(Arc::new(FieldData { p, k, q, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// Modulus coefficients low-to-high including the leading 1; empty for
    /// prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// The base field F_p of this presentation.
    pub fn base_field(&self) -> Field {
        Field::with_ceiling(self.0.p, 1, u128::MAX).expect("prime base field")
    }

    pub fn zero(&self) -> FElem {
        FElem(0)
    }

    pub fn one(&self) -> FElem {
        FElem(1)
    }

    /// Element from a canonical index. Panics if out of range: indices come
    /// from this crate's own enumeration or parsing, which validate.
    pub fn elem(&self, index: u64) -> FElem {
        assert!(index < self.0.q, "element index {index} out of range for {self:?}");
        FElem(index)
    }

    /// Embeds an integer via reduction mod p (constant coefficient).
    pub fn from_int(&self, v: u64) -> FElem {
        FElem(v % self.0.p)
    }

    /// Element from a coefficient vector (low-to-high, entries already in
    /// `[0, p)`), padded or truncated checks left to the caller.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FElem {
        assert!(coeffs.len() <= self.0.k as usize);
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            debug_assert!(c < self.0.p);
            idx = idx * self.0.p + c;
        }
        FElem(idx)
    }

    /// Coefficient vector of `a` in the polynomial basis, low-to-high,
    /// length k.
    pub fn coeffs(&self, a: FElem) -> Vec<u64> {
        decode_digits(a.0, self.0.p, self.0.k as usize)
    }

    /// All elements in canonical index order `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FElem> {
        (0..self.0.q).map(FElem)
    }

    /// Nonzero elements in canonical index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FElem> {
        (1..self.0.q).map(FElem)
    }

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        let d = &*self.0;
        if d.k == 1 {
            return FElem((a.0 + b.0) % d.p);
        }
        let (mut x, mut y, p) = (a.0, b.0, d.p);
        let mut idx = 0u64;
        let mut mult = 1u64;
        for _ in 0..d.k {
            idx += (x % p + y % p) % p * mult;
            x /= p;
            y /= p;
            mult *= p;
        }
        FElem(idx)
    }

    pub fn neg(&self, a: FElem) -> FElem {
        let d = &*self.0;
        if d.k == 1 {
            return FElem(if a.0 == 0 { 0 } else { d.p - a.0 });
        }
        let mut x = a.0;
        let p = d.p;
        let mut idx = 0u64;
        let mut mult = 1u64;
        for _ in 0..d.k {
            let c = x % p;
            idx += if c == 0 { 0 } else { p - c } * mult;
            x /= p;
            mult *= p;
        }
        FElem(idx)
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        let d = &*self.0;
        if d.k == 1 {
            return FElem(a.0 * b.0 % d.p);
        }
        if a.0 == 0 || b.0 == 0 {
            return FElem(0);
        }
        let da = decode_digits(a.0, d.p, d.k as usize);
        let db = decode_digits(b.0, d.p, d.k as usize);
        let prod = polymul_mod(&da, &db, &d.modulus, d.p);
        FElem(self.from_coeffs(&prod).0)
    }

    pub fn pow(&self, a: FElem, mut e: u64) -> FElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: FElem) -> Result<FElem> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    /// Smallest e >= 1 with a^e = 1, by direct power enumeration.
    pub fn element_order(&self, a: FElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut acc = a;
        let mut e = 1u64;
        while acc != self.one() {
            acc = self.mul(acc, a);
            e += 1;
        }
        Ok(e)
    }

    /// First element, in canonical index order over F*, whose multiplicative
    /// order is >= `min_order`.
    pub fn find_element_of_order(&self, min_order: u64) -> Result<FElem> {
        if min_order > self.0.q - 1 {
            return Err(Error::OrderUnavailable { required: min_order, q: self.0.q });
        }
        for a in self.nonzero_elements() {
            if self.element_order(a)? >= min_order {
                return Ok(a);
            }
        }
        // the multiplicative group is cyclic of order q-1, so a generator
        // exists and the loop above always returns
        unreachable!("cyclic group of order q-1 has a generator")
    }

    /// The coefficient vector of `a` over the base field F_p, as base-field
    /// elements. Requires an extension presentation.
    pub fn phi(&self, a: FElem) -> Result<Vec<FElem>> {
        if self.0.k == 1 {
            return Err(Error::NotAnExtension);
        }
        Ok(self.coeffs(a).into_iter().map(FElem).collect())
    }

    /// Serializes an element as comma-joined base-p coefficients, low-to-high.
    pub fn elem_to_string(&self, a: FElem) -> String {
        self.coeffs(a)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the serialization produced by [`Field::elem_to_string`].
    pub fn elem_from_str(&self, s: &str) -> Result<FElem> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != self.0.k as usize {
            return Err(Error::Parse(format!(
                "element '{s}': expected {} coefficients, got {}",
                self.0.k,
                parts.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(parts.len());
        for part in parts {
            let c: u64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("element coefficient '{part}'")))?;
            if c >= self.0.p {
                return Err(Error::Parse(format!(
                    "element coefficient {c} not reduced mod {}",
                    self.0.p
                )));
            }
            coeffs.push(c);
        }
        Ok(self.from_coeffs(&coeffs))
    }

    /// The textual field header used by every file format.
    pub fn header(&self) -> String {
        if self.0.k == 1 {
            format!("field p={} k=1", self.0.p)
        } else {
            let mods = self
                .0
                .modulus
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("field p={} k={} modulus={}", self.0.p, self.0.k, mods)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_prime() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert!(f2.modulus().is_empty());
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.q(), 7);
    }

    #[test]
    fn make_field_f4_modulus() {
        // oracle: x^2+x+1 is the only monic irreducible quadratic over F_2,
        // by exhaustive check of all four monic quadratics
        let f2 = Field::new(2, 1).unwrap();
        let mut irreducible = Vec::new();
        for c0 in 0..2u64 {
            for c1 in 0..2u64 {
                let poly = [c0, c1, 1];
                let has_root = f2.elements().any(|a| {
                    let v = f2.add(f2.add(f2.mul(a, a), f2.mul(FElem(c1), a)), FElem(c0));
                    v.is_zero()
                });
                if !has_root {
                    irreducible.push(poly.to_vec());
                }
            }
        }
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);

        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn make_field_rejects_bad_inputs() {
        assert!(matches!(Field::new(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(Field::new(2, 25), Err(Error::SizeCeiling { .. })));
    }

    #[test]
    fn ceiling_is_overridable() {
        assert!(Field::new(2, 21).is_err());
        let big = Field::with_ceiling(2, 21, 1 << 22).unwrap();
        assert_eq!(big.q(), 1 << 21);
    }

    #[test]
    fn make_field_deterministic() {
        let a = Field::new(3, 3).unwrap();
        let b = Field::new(3, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        // low-degree-first lexicographic order puts x^3+x^2+1 before x^3+x+1
        let a8 = Field::new(2, 3).unwrap();
        assert_eq!(a8.modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn element_order_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.element_order(FElem(1)).unwrap(), 1);
        // oracles: enumerate powers 2,4,1 and 3,2,6,4,5,1
        assert_eq!(f7.element_order(FElem(2)).unwrap(), 3);
        assert_eq!(f7.element_order(FElem(3)).unwrap(), 6);
        assert!(f7.element_order(FElem(0)).is_err());
    }

    #[test]
    fn find_element_of_order_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.find_element_of_order(6).unwrap(), FElem(3));
        assert_eq!(f7.find_element_of_order(1).unwrap(), FElem(1));
        let f13 = Field::new(13, 1).unwrap();
        assert_eq!(f13.find_element_of_order(12).unwrap(), FElem(2));
        assert!(f7.find_element_of_order(7).is_err());
    }

    #[test]
    fn phi_examples() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.phi(FElem(0)).unwrap(), vec![FElem(0), FElem(0)]);
        let z = f4.elem(2);
        assert_eq!(f4.phi(z).unwrap(), vec![FElem(0), FElem(1)]);
        // z^2 = z + 1 mod x^2+x+1
        let z2 = f4.mul(z, z);
        assert_eq!(f4.phi(z2).unwrap(), vec![FElem(1), FElem(1)]);
        let f7 = Field::new(7, 1).unwrap();
        assert!(matches!(f7.phi(FElem(3)), Err(Error::NotAnExtension)));
    }

    fn all_desk_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
            let mut k = 1;
            while (p as u128).pow(k) <= 64 {
                out.push(Field::new(p, k).unwrap());
                k += 1;
            }
        }
        out
    }

    #[test]
    fn exhaustive_field_axioms_small() {
        for f in all_desk_fields() {
            let q = f.q();
            for a in f.nonzero_elements() {
                let inv = f.inv(a).unwrap();
                assert_eq!(f.mul(a, inv), f.one(), "a*a^-1 in F_{q}");
                let order = f.element_order(a).unwrap();
                assert_eq!((q - 1) % order, 0, "order | q-1 in F_{q}");
            }
            // Frobenius additivity
            let p = f.p();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), p);
                    let rhs = f.add(f.pow(a, p), f.pow(b, p));
                    assert_eq!(lhs, rhs, "(a+b)^p = a^p+b^p in F_{q}");
                }
            }
        }
    }

    #[test]
    fn phi_is_linear() {
        for f in all_desk_fields().into_iter().filter(|f| f.k() > 1) {
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.phi(f.add(a, b)).unwrap();
                    let pa = f.phi(a).unwrap();
                    let pb = f.phi(b).unwrap();
                    let base = f.base_field();
                    let rhs: Vec<FElem> =
                        pa.iter().zip(&pb).map(|(&x, &y)| base.add(x, y)).collect();
                    assert_eq!(lhs, rhs);
                }
                for c in 0..f.p() {
                    let scalar = f.from_int(c);
                    let lhs = f.phi(f.mul(scalar, a)).unwrap();
                    let base = f.base_field();
                    let rhs: Vec<FElem> = f
                        .phi(a)
                        .unwrap()
                        .into_iter()
                        .map(|x| base.mul(base.from_int(c), x))
                        .collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn elem_string_round_trip() {
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements() {
            let s = f9.elem_to_string(a);
            assert_eq!(f9.elem_from_str(&s).unwrap(), a);
        }
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.elem_to_string(FElem(5)), "5");
    }
}
