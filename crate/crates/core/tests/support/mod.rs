//! Independent oracles for integration tests: double-double arithmetic,
//! exact characteristic polynomials, square-free factorization and real
//! root isolation.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unirat::linalg::{Complex64, ComplexMatrix, RealMatrix};

pub const EPS: f64 = f64::EPSILON;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `n` distinct uniform draws from `[a, b)`.
pub fn distinct_uniform(r: &mut impl Rng, n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(n);
    while out.len() < n {
        let x = r.gen_range(a..b);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

// ---------------------------------------------------------------- double-double

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    /// Exact for `|n| < 2^106`.
    pub fn from_i128(n: i128) -> DD {
        let hi = n as f64;
        let lo = (n - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        DD { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn signum(self) -> i32 {
        match self.partial_cmp(&DD::ZERO) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    pub fn sqrt(self) -> DD {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = DD::new(self.hi * x);
        let diff = self - ax * ax;
        ax + DD::new(diff.hi * x * 0.5)
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, o: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            c => c,
        }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b * DD::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DD::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub const ZERO: CDD = CDD {
        re: DD::ZERO,
        im: DD::ZERO,
    };

    pub fn new(z: Complex64) -> CDD {
        CDD {
            re: DD::new(z.re),
            im: DD::new(z.im),
        }
    }

    pub fn real(x: DD) -> CDD {
        CDD { re: x, im: DD::ZERO }
    }

    pub fn conj(self) -> CDD {
        CDD {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> DD {
        self.re * self.re + self.im * self.im
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for CDD {
    type Output = CDD;
    fn add(self, b: CDD) -> CDD {
        CDD {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for CDD {
    type Output = CDD;
    fn sub(self, b: CDD) -> CDD {
        CDD {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Mul for CDD {
    type Output = CDD;
    fn mul(self, b: CDD) -> CDD {
        CDD {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for CDD {
    type Output = CDD;
    fn div(self, b: CDD) -> CDD {
        let d = b.norm_sqr();
        let n = self * b.conj();
        CDD {
            re: n.re / d,
            im: n.im / d,
        }
    }
}

// ---------------------------------------------------------------- polynomials

/// Horner evaluation; coefficients constant term first.
pub fn poly_eval(p: &[DD], x: DD) -> DD {
    p.iter().rev().fold(DD::ZERO, |acc, &c| acc * x + c)
}

fn trim_dd(p: &[DD]) -> &[DD] {
    let mut n = p.len();
    while n > 0 && p[n - 1].is_zero() {
        n -= 1;
    }
    &p[..n]
}

/// Roots of a real polynomial whose roots are real and simple, found by
/// bisection between the (recursively computed) roots of its derivative.
pub fn real_roots(p: &[DD]) -> Vec<DD> {
    let p = trim_dd(p);
    let n = p.len().saturating_sub(1);
    match n {
        0 => return vec![],
        1 => return vec![-p[0] / p[1]],
        _ => {}
    }
    let dp: Vec<DD> = (1..=n).map(|i| p[i] * DD::new(i as f64)).collect();
    let crit = real_roots(&dp);
    let lead = p[n].abs();
    let bound = p[..n]
        .iter()
        .fold(DD::ONE, |m, c| {
            let v = c.abs() / lead;
            if v > m {
                v
            } else {
                m
            }
        })
        + DD::ONE;
    let mut pts = vec![-bound];
    pts.extend(crit);
    pts.push(bound);
    let mut roots = Vec::with_capacity(n);
    for w in pts.windows(2) {
        roots.push(bisect(p, w[0], w[1]));
    }
    roots
}

fn bisect(p: &[DD], mut a: DD, mut b: DD) -> DD {
    let mut fa = poly_eval(p, a);
    let fb = poly_eval(p, b);
    if fa.is_zero() {
        return a;
    }
    if fb.is_zero() {
        return b;
    }
    if fa.signum() == fb.signum() {
        // Only reachable at the precision limit: the root sits on a critical point.
        return if fa.abs() < fb.abs() { a } else { b };
    }
    for _ in 0..220 {
        let mid = (a + b) * DD::new(0.5);
        if mid == a || mid == b {
            break;
        }
        let fm = poly_eval(p, mid);
        if fm.is_zero() {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    (a + b) * DD::new(0.5)
}

// ---------------------------------------------------------------- exact rationals

type Q = Ratio<i128>;
type QPoly = Vec<Q>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| *c == Q::from_integer(0)) {
        p.pop();
    }
    p
}

fn q_deriv(p: &[Q]) -> QPoly {
    q_trim(
        (1..p.len())
            .map(|i| p[i] * Q::from_integer(i as i128))
            .collect(),
    )
}

fn q_sub(a: &[Q], b: &[Q]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Q::from_integer(0);
    q_trim(
        (0..n)
            .map(|i| *a.get(i).unwrap_or(&z) - *b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn q_divrem(a: &[Q], b: &[Q]) -> (QPoly, QPoly) {
    let b = q_trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = q_trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Q::from_integer(0); r.len() - b.len() + 1];
    let lead = *b.last().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = *r.last().unwrap() / lead;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] -= c * bi;
        }
        r.pop();
        r = q_trim(r);
    }
    (q_trim(q), r)
}

fn q_monic(p: QPoly) -> QPoly {
    let lead = *p.last().unwrap();
    p.into_iter().map(|c| c / lead).collect()
}

fn q_gcd(a: &[Q], b: &[Q]) -> QPoly {
    let (mut a, mut b) = (q_trim(a.to_vec()), q_trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = q_divrem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(a)
}

fn q_exact_div(a: &[Q], b: &[Q]) -> QPoly {
    let (q, r) = q_divrem(a, b);
    assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Yun's square-free decomposition: `(factor, multiplicity)` pairs with
/// monic, square-free, pairwise coprime factors.
pub fn square_free(p: &[i128]) -> Vec<(Vec<Q>, usize)> {
    let f = q_trim(p.iter().map(|&c| Q::from_integer(c)).collect());
    let df = q_deriv(&f);
    let a0 = if df.is_empty() { f.clone() } else { q_gcd(&f, &df) };
    let mut b = q_exact_div(&f, &a0);
    let c = if df.is_empty() { vec![] } else { q_exact_div(&df, &a0) };
    let mut d = q_sub(&c, &q_deriv(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while b.len() > 1 {
        let a = if d.is_empty() { q_monic(b.clone()) } else { q_gcd(&b, &d) };
        let nb = q_exact_div(&b, &a);
        let nc = if d.is_empty() { vec![] } else { q_exact_div(&d, &a) };
        if a.len() > 1 {
            out.push((a, i));
        }
        d = q_sub(&nc, &q_deriv(&nb));
        b = nb;
        i += 1;
    }
    out
}

/// Integer multiple of a rational polynomial, as double-doubles.
fn q_to_dd(p: &[Q]) -> Vec<DD> {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let l = p.iter().fold(1_i128, |l, c| l / gcd(l, *c.denom()) * c.denom());
    p.iter()
        .map(|c| DD::from_i128(c.numer() * (l / c.denom())))
        .collect()
}

// ---------------------------------------------------------------- singular values

/// Characteristic polynomial `det(lambda I - G)` of an integer Hermitian
/// matrix given as Gaussian integers, by Faddeev-LeVerrier (exact).
pub fn charpoly_gaussian(g: &[Vec<(i128, i128)>]) -> Vec<i128> {
    let n = g.len();
    let mul = |a: (i128, i128), b: (i128, i128)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let mut c = vec![0_i128; n + 1];
    c[n] = 1;
    // Row-major n x n work matrices.
    let mut m = vec![(0_i128, 0_i128); n * n];
    let mut next = vec![(0_i128, 0_i128); n * n];
    for k in 1..=n {
        // M_k = G M_{k-1} + c_{n-k+1} I
        for i in 0..n {
            for j in 0..n {
                let mut s = (0, 0);
                for l in 0..n {
                    let p = mul(g[i][l], m[l * n + j]);
                    s = (s.0 + p.0, s.1 + p.1);
                }
                if i == j {
                    s.0 += c[n - k + 1];
                }
                next[i * n + j] = s;
            }
        }
        std::mem::swap(&mut m, &mut next);
        let mut tr = (0, 0);
        for i in 0..n {
            for l in 0..n {
                let p = mul(g[i][l], m[l * n + i]);
                tr = (tr.0 + p.0, tr.1 + p.1);
            }
        }
        assert_eq!(tr.1, 0, "trace of a Hermitian product is real");
        assert_eq!(tr.0 % k as i128, 0, "Faddeev-LeVerrier division is exact");
        c[n - k] = -tr.0 / k as i128;
    }
    c
}

/// `A^* A` for a Gaussian-integer matrix (rows of `(re, im)`).
pub fn gram_gaussian(a: &[Vec<(i128, i128)>]) -> Vec<Vec<(i128, i128)>> {
    let cols = a[0].len();
    (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    a.iter().fold((0, 0), |s, row| {
                        let (x, y) = (row[i].0, -row[i].1);
                        let (u, v) = row[j];
                        (s.0 + x * u - y * v, s.1 + x * v + y * u)
                    })
                })
                .collect()
        })
        .collect()
}

/// Singular values (descending, with multiplicity) from the exact
/// characteristic polynomial of the Gram matrix.
pub fn singular_values_from_charpoly(c: &[i128]) -> Vec<f64> {
    // Zero eigenvalues come from the power of x dividing c, exactly.
    let zeros = c.iter().take_while(|&&v| v == 0).count();
    let mut out = vec![0.0; zeros];
    for (factor, mult) in square_free(&c[zeros..]) {
        for lam in real_roots(&q_to_dd(&factor)) {
            let s = if lam.hi <= 0.0 { 0.0 } else { lam.sqrt().to_f64() };
            out.extend(std::iter::repeat(s).take(mult));
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Singular values of an integer-entried complex matrix via the exact route.
pub fn exact_singular_values(a: &[Vec<(i128, i128)>]) -> Vec<f64> {
    singular_values_from_charpoly(&charpoly_gaussian(&gram_gaussian(a)))
}

/// Characteristic polynomial of a Hermitian matrix in double-double.
fn charpoly_cdd(g: &[Vec<CDD>]) -> Vec<DD> {
    let n = g.len();
    let mut c = vec![DD::ZERO; n + 1];
    c[n] = DD::ONE;
    let mut m = vec![vec![CDD::ZERO; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![CDD::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = CDD::ZERO;
                for l in 0..n {
                    s = s + g[i][l] * m[l][j];
                }
                if i == j {
                    s = s + CDD::real(c[n - k + 1]);
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = CDD::ZERO;
        for i in 0..n {
            for l in 0..n {
                tr = tr + g[i][l] * m[l][i];
            }
        }
        c[n - k] = -(tr.re / DD::new(k as f64));
    }
    c
}

/// Singular values of a floating-point complex matrix from the Gram
/// characteristic polynomial in double-double (distinct values assumed).
pub fn dd_singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = a.shape();
    let g: Vec<Vec<CDD>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    (0..rows).fold(CDD::ZERO, |s, k| {
                        s + CDD::new(a[(k, i)]).conj() * CDD::new(a[(k, j)])
                    })
                })
                .collect()
        })
        .collect();
    let mut out: Vec<f64> = real_roots(&charpoly_cdd(&g))
        .into_iter()
        .map(|l| if l.hi <= 0.0 { 0.0 } else { l.sqrt().to_f64() })
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

pub fn dd_singular_values_real(a: &RealMatrix) -> Vec<f64> {
    dd_singular_values(&a.to_complex())
}

/// Largest `|got - want|` relative to `want`, or to `scale` when `want` is 0.
pub fn max_rel_diff(got: &[f64], want: &[f64], scale: f64) -> f64 {
    assert_eq!(got.len(), want.len());
    got.iter().zip(want).fold(0.0, |m, (&g, &w)| {
        let d = (g - w).abs() / if w > 0.0 { w } else { scale.max(f64::MIN_POSITIVE) };
        m.max(d)
    })
}

// ---------------------------------------------------------------- barycentric oracle

/// `sum f_j w_j/(x-y_j) / sum w_j/(x-y_j)` in double-double, `f_j = e^{iy_j}`.
pub fn dd_barycentric(support: &[f64], w: &[Complex64], x: f64) -> Complex64 {
    let mut n = CDD::ZERO;
    let mut d = CDD::ZERO;
    for (&y, &wj) in support.iter().zip(w) {
        let diff = CDD::real(DD::new(x) - DD::new(y));
        let term = CDD::new(wj) / diff;
        n = n + CDD::new(unirat::linalg::cis(y)) * term;
        d = d + term;
    }
    (n / d).to_c64()
}
