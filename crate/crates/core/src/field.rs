//! Small finite fields GF(q), q ≤ 32, as lookup tables.
//!
//! Prime orders use residues mod p. Prime powers use polynomials over GF(p) modulo a fixed
//! irreducible polynomial; an element `a0 + a1·x + …` is encoded as the integer `Σ ai·p^i`.
//!
//! | q  | modulus            |
//! |----|--------------------|
//! | 4  | x² + x + 1         |
//! | 8  | x³ + x + 1         |
//! | 9  | x² + 1             |
//! | 16 | x⁴ + x + 1         |
//! | 25 | x² + 3             |
//! | 27 | x³ + 2x + 1        |
//! | 32 | x⁵ + x² + 1        |

use crate::error::{Error, Result};

pub type Elem = u8;

#[derive(Clone, Debug)]
pub struct FieldSpec {
    q: usize,
    p: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// Low-to-high coefficients of the monic modulus, leading 1 omitted.
fn modulus(q: usize) -> Option<(usize, &'static [usize])> {
    Some(match q {
        4 => (2, &[1, 1]),
        8 => (2, &[1, 1, 0]),
        9 => (3, &[1, 0]),
        16 => (2, &[1, 1, 0, 0]),
        25 => (5, &[3, 0]),
        27 => (3, &[1, 2, 0]),
        32 => (2, &[1, 0, 1, 0, 0]),
        _ => return None,
    })
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FieldSpec {
    pub fn new(q: u32) -> Result<FieldSpec> {
        let qs = q as usize;
        if qs <= 32 && is_prime(qs) {
            return Ok(Self::prime(qs));
        }
        match modulus(qs) {
            Some((p, coeffs)) => Ok(Self::extension(qs, p, coeffs)),
            None => Err(Error::BadField(q)),
        }
    }

    fn prime(p: usize) -> FieldSpec {
        let add = (0..p * p).map(|i| ((i / p + i % p) % p) as Elem).collect();
        let mul = (0..p * p).map(|i| ((i / p) * (i % p) % p) as Elem).collect();
        Self::finish(p, p, add, mul)
    }

    fn extension(q: usize, p: usize, modulus: &[usize]) -> FieldSpec {
        let k = modulus.len();
        let digits = |mut a: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let encode = |ds: &[usize]| ds.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = (0..k).map(|i| (da[i] + db[i]) % p).collect();
                add[a * q + b] = encode(&sum) as Elem;
                let mut prod = vec![0usize; 2 * k - 1];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                // reduce: x^k = -(modulus)
                for deg in (k..2 * k - 1).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[deg - k + i] = (prod[deg - k + i] + c * (p - m % p)) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..k]) as Elem;
            }
        }
        Self::finish(q, p, add, mul)
    }

    fn finish(q: usize, p: usize, add: Vec<Elem>, mul: Vec<Elem>) -> FieldSpec {
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[a * q + b] == 1).unwrap_or(0) as Elem
                }
            })
            .collect();
        FieldSpec {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0.
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as u16).map(|e| e as Elem)
    }

    pub fn dot(&self, u: &[Elem], v: &[Elem]) -> Elem {
        u.iter().zip(v).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Scales `v` so that its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &mut [Elem]) -> bool {
        let Some(&lead) = v.iter().find(|&&x| x != 0) else {
            return false;
        };
        let s = self.inv(lead);
        for x in v.iter_mut() {
            *x = self.mul(*x, s);
        }
        true
    }

    /// Checks the field axioms on the tables.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let q = self.q as Elem;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(format!("{a} has no inverse"));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a},{b})"));
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("additive associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("multiplicative associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// All normalised nonzero vectors of length `dim`: the points of PG(dim-1, q), in lexicographic
/// order of their coordinate tuples.
pub fn projective_points(f: &FieldSpec, dim: usize) -> Vec<Vec<Elem>> {
    let q = f.order();
    let total = q.pow(dim as u32);
    (1..total)
        .map(|mut code| {
            let mut v = vec![0 as Elem; dim];
            for i in (0..dim).rev() {
                v[i] = (code % q) as Elem;
                code /= q;
            }
            v
        })
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_hold_up_to_16() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            FieldSpec::new(q).unwrap().check_axioms().unwrap();
        }
    }

    #[test]
    fn larger_fields_have_inverses() {
        for q in [17, 19, 23, 25, 27, 29, 31, 32] {
            let f = FieldSpec::new(q).unwrap();
            for a in 1..q as Elem {
                assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12, 15, 33, 49] {
            assert!(matches!(FieldSpec::new(q), Err(Error::BadField(_))));
        }
    }

    #[test]
    fn point_counts() {
        let f = FieldSpec::new(3).unwrap();
        assert_eq!(projective_points(&f, 3).len(), 13);
        assert_eq!(projective_points(&f, 4).len(), 40);
    }
}
