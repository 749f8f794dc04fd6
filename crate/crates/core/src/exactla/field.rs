//! Finite fields F_q with q = p^d <= 256.
//!
//! Elements are encoded as integers `0..q`. For prime fields the encoding is the
//! residue itself. For extension fields an element is the base-p digit string of its
//! polynomial coefficients, with multiplication through log/antilog tables built from
//! a primitive polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use super::LinAlgError;

/// Field element. Always `< q` for the field it belongs to.
pub type Elem = u8;

struct ExtTables {
    add: Vec<u8>,
    log: Vec<u8>,
    exp: Vec<u8>,
}

/// Immutable description of a finite field; shared through [`Field`].
pub struct FieldDesc {
    p: u32,
    d: u32,
    q: u32,
    neg: Vec<u8>,
    inv: Vec<u8>,
    ext: Option<ExtTables>,
}

/// Cheap copyable handle to an interned field description.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldDesc);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.q.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Splits q into (p, d) with q = p^d, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q % k == 0)?;
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut d) = (q, 0);
    while r % p == 0 {
        r /= p;
        d += 1;
    }
    (r == 1).then_some((p, d))
}

fn registry() -> &'static Mutex<HashMap<u32, &'static FieldDesc>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static FieldDesc>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The field with `q` elements.
    pub fn new(q: u32) -> Result<Field, LinAlgError> {
        let (p, d) = prime_power(q).ok_or(LinAlgError::NotPrimePower(q))?;
        if q > 256 {
            return Err(LinAlgError::FieldTooLarge(q));
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(desc) = reg.get(&q) {
            return Ok(Field(desc));
        }
        let desc: &'static FieldDesc = Box::leak(Box::new(FieldDesc::build(p, d)));
        reg.insert(q, desc);
        Ok(Field(desc))
    }

    /// Convenience constructor that panics on an invalid size; meant for literals.
    pub fn of(q: u32) -> Field {
        Field::new(q).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn d(&self) -> u32 {
        self.0.d
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn size(&self) -> usize {
        self.0.q as usize
    }
    pub fn is_prime(&self) -> bool {
        self.0.d == 1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.ext {
            None => {
                let s = a as u32 + b as u32;
                (if s >= self.0.p { s - self.0.p } else { s }) as u8
            }
            Some(t) => t.add[a as usize * self.0.q as usize + b as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.ext {
            None => ((a as u32 * b as u32) % self.0.p) as u8,
            Some(t) => {
                let s = t.log[a as usize] as u32 + t.log[b as usize] as u32;
                t.exp[(s % (self.0.q - 1)) as usize]
            }
        }
    }

    /// `a + c*b`, the inner step of every elimination.
    #[inline]
    pub fn mul_add(&self, a: Elem, c: Elem, b: Elem) -> Elem {
        self.add(a, self.mul(c, b))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under Z -> F_q.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as u8
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        if self.0.q == 2 {
            return 1;
        }
        match &self.0.ext {
            Some(t) => t.exp[1],
            None => (1..self.0.q as u8)
                .find(|&g| self.order(g) == self.0.q - 1)
                .expect("prime field has a primitive root"),
        }
    }

    fn order(&self, a: Elem) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements of an F_p-basis of F_q (powers of the primitive element).
    pub fn prime_basis(&self) -> Vec<Elem> {
        let g = self.primitive();
        (0..self.0.d).map(|i| self.pow(g, i as u64)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as u8
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        1..self.0.q as u8
    }
}

impl FieldDesc {
    fn build(p: u32, d: u32) -> FieldDesc {
        let q = p.pow(d);
        if d == 1 {
            let neg = (0..q).map(|a| ((p - a) % p) as u8).collect();
            let mut inv = vec![0u8; q as usize];
            for a in 1..q {
                inv[a as usize] = (1..q).find(|b| a * b % p == 1).unwrap() as u8;
            }
            return FieldDesc { p, d, q, neg, inv, ext: None };
        }
        let digits = |x: u32| -> Vec<u32> { (0..d).map(|i| x / p.pow(i) % p).collect() };
        let undigits = |v: &[u32]| -> u32 { v.iter().enumerate().map(|(i, c)| c * p.pow(i as u32)).sum() };
        let mut add = vec![0u8; (q * q) as usize];
        let mut neg = vec![0u8; q as usize];
        for a in 0..q {
            let da = digits(a);
            neg[a as usize] = undigits(&da.iter().map(|c| (p - c) % p).collect::<Vec<_>>()) as u8;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u8;
            }
        }
        let poly = primitive_polynomial(p, d);
        // multiplication by x modulo the monic polynomial, on digit vectors
        let times_x = |v: &[u32]| -> Vec<u32> {
            let top = v[d as usize - 1];
            let mut r = vec![0u32; d as usize];
            for i in (1..d as usize).rev() {
                r[i] = v[i - 1];
            }
            for (i, ri) in r.iter_mut().enumerate() {
                *ri = (*ri + (p - top) * poly[i] % p) % p;
            }
            r
        };
        let mut exp = vec![0u8; q as usize];
        let mut log = vec![0u8; q as usize];
        let mut cur = vec![0u32; d as usize];
        cur[0] = 1;
        for k in 0..(q - 1) {
            let e = undigits(&cur);
            exp[k as usize] = e as u8;
            log[e as usize] = k as u8;
            cur = times_x(&cur);
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q as usize {
            let l = log[a] as u32;
            inv[a] = exp[((q - 1 - l) % (q - 1)) as usize];
        }
        FieldDesc { p, d, q, neg, inv, ext: Some(ExtTables { add, log, exp }) }
    }
}

/// Lowest monic polynomial of degree d (constant-term-first coefficients, leading 1
/// omitted) whose root generates the multiplicative group of F_{p^d}.
fn primitive_polynomial(p: u32, d: u32) -> Vec<u32> {
    let q = p.pow(d);
    for code in 0..q {
        let coeffs: Vec<u32> = (0..d).map(|i| code / p.pow(i) % p).collect();
        if coeffs[0] == 0 {
            continue;
        }
        // order of x modulo the polynomial
        let mut cur = vec![0u32; d as usize];
        cur[0] = 1;
        let mut ok = true;
        for k in 1..q {
            let top = cur[d as usize - 1];
            let mut r = vec![0u32; d as usize];
            for i in (1..d as usize).rev() {
                r[i] = cur[i - 1];
            }
            for (i, ri) in r.iter_mut().enumerate() {
                *ri = (*ri + (p - top) * coeffs[i] % p) % p;
            }
            cur = r;
            let is_one = cur[0] == 1 && cur[1..].iter().all(|&c| c == 0);
            if is_one && k < q - 1 {
                ok = false;
                break;
            }
            if k == q - 1 && !is_one {
                ok = false;
            }
        }
        if ok {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial always exists")
}
