//! Kauffman bracket, Jones polynomial and Euler characteristics.
//!
//! Conventions: `⟨crossing⟩ = ⟨0-smoothing⟩ − q⟨1-smoothing⟩`, each loop
//! contributes `q + q⁻¹`, and `J(K) = (−1)^{n₋} q^{n₊−2n₋} ⟨K⟩`, so the
//! unknot maps to `q + q⁻¹`.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::homology::BettiTable;
use crate::knot_io::{KnotDiagram, LaurentPolynomial};
use crate::resolution::{for_each_loop_count, ResolutionCube};

/// `Σ_r (−q)^{|r|} (q+q⁻¹)^{ℓ(r)}` over a built cube.
pub fn kauffman_bracket_statesum(cube: &ResolutionCube) -> LaurentPolynomial {
    let mut tally: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for r in cube.resolutions() {
        *tally.entry((r.hamming(), cube.loop_count(r))).or_insert(0) += 1;
    }
    bracket_from_tally(&tally)
}

/// State sum without materializing the cube (up to the streaming limit).
pub fn kauffman_bracket_streaming(k: &KnotDiagram) -> Result<LaurentPolynomial> {
    let mut tally: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for_each_loop_count(k, |r, loops| *tally.entry((r.hamming(), loops)).or_insert(0) += 1)?;
    Ok(bracket_from_tally(&tally))
}

fn bracket_from_tally(tally: &BTreeMap<(usize, usize), i64>) -> LaurentPolynomial {
    let circle = LaurentPolynomial::loop_value();
    let mut total = LaurentPolynomial::zero();
    for (&(ones, loops), &count) in tally {
        let sign = if ones % 2 == 0 { count } else { -count };
        total += &(circle.pow(loops as u32).shift(ones as i32).scale(sign));
    }
    total
}

/// Bracket by the skein relation, resolving crossings in order and
/// memoizing on how the remaining crossing ports are joined by arcs.
pub fn kauffman_bracket_recursive(k: &KnotDiagram) -> LaurentPolynomial {
    let m = k.m();
    if m == 0 {
        return LaurentPolynomial::loop_value();
    }
    // Port `4c + s` is slot `s` of crossing `c`; arcs join the two ports
    // carrying the same edge label.
    let mut first: HashMap<u32, usize> = HashMap::new();
    let mut partner = vec![0usize; 4 * m];
    for (c, tuple) in k.crossings().iter().enumerate() {
        for (s, &label) in tuple.iter().enumerate() {
            let port = 4 * c + s;
            if let Some(other) = first.remove(&label) {
                partner[port] = other;
                partner[other] = port;
            } else {
                first.insert(label, port);
            }
        }
    }
    let mut memo = HashMap::new();
    skein(0, partner, m, &mut memo)
}

/// Slot pairs joined by the 0- and 1-smoothings.
const SMOOTHINGS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (2, 1)]];

fn skein(c: usize, partner: Vec<usize>, m: usize, memo: &mut HashMap<(usize, Vec<usize>), LaurentPolynomial>) -> LaurentPolynomial {
    if c == m {
        return LaurentPolynomial::one();
    }
    // Key on the joins among ports of crossings c.. only.
    let key_ports: Vec<usize> = partner[4 * c..].to_vec();
    if let Some(v) = memo.get(&(c, key_ports.clone())) {
        return v.clone();
    }
    let circle = LaurentPolynomial::loop_value();
    let mut total = LaurentPolynomial::zero();
    for (bit, joins) in SMOOTHINGS.iter().enumerate() {
        let mut p = partner.clone();
        let mut closed = 0u32;
        for &(s, t) in joins {
            let (x, y) = (4 * c + s, 4 * c + t);
            let (a, b) = (p[x], p[y]);
            if a == y {
                closed += 1;
            } else {
                p[a] = b;
                p[b] = a;
            }
        }
        let rest = skein(c + 1, p, m, memo);
        let term = &rest * &circle.pow(closed);
        total = if bit == 0 { total + term } else { total - term.shift(1) };
    }
    memo.insert((c, key_ports), total.clone());
    total
}

/// `(−1)^{n₋} q^{n₊−2n₋} ⟨K⟩`.
pub fn jones_from_bracket(k: &KnotDiagram, bracket: &LaurentPolynomial) -> LaurentPolynomial {
    let (np, nm) = (k.n_plus() as i32, k.n_minus() as i32);
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    bracket.shift(np - 2 * nm).scale(sign)
}

/// Jones polynomial through the recursive bracket.
pub fn jones(k: &KnotDiagram) -> LaurentPolynomial {
    jones_from_bracket(k, &kauffman_bracket_recursive(k))
}

/// `Σ (−1)^i q^j β_{i,j}` over a Betti table.
pub fn euler_characteristic(b: &BettiTable) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for (&(i, j), &(_, beta)) in &b.entries {
        p.add_term(j, if i.rem_euclid(2) == 0 { beta as i64 } else { -(beta as i64) });
    }
    p
}

/// `Σ_i (−1)^i gdim C^i` over unshifted chain dimensions; equals `⟨K⟩`.
pub fn chain_euler_characteristic(dims: &BTreeMap<(i32, i32), usize>) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for (&(i, j), &d) in dims {
        p.add_term(j, if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) });
    }
    p
}

/// Element of ℚ(ζ) with `ζ = e^{iπ/5}`, a primitive 10th root of unity,
/// in the power basis `1, ζ, ζ², ζ³` modulo `ζ⁴ = ζ³ − ζ² + ζ − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclo10(pub [BigRational; 4]);

impl Cyclo10 {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| BigRational::zero()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut z = Self::zero();
        z.0[0] = r;
        z
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i32) -> Self {
        let k = k.rem_euclid(10) as usize;
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Self::reduce(coeffs)
    }

    fn reduce(mut c: Vec<BigRational>) -> Self {
        // x⁴ ≡ x³ − x² + x − 1
        while c.len() > 4 {
            let top = c.pop().expect("nonempty");
            let d = c.len(); // top was the coefficient of x^d
            c[d - 1] += &top;
            c[d - 2] -= &top;
            c[d - 3] += &top;
            c[d - 4] -= &top;
        }
        c.resize(4, BigRational::zero());
        Self([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])
    }

    /// Complex conjugate (`ζ ↦ ζ⁻¹`).
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &Self::zeta_pow(-(k as i32)).scale(c);
            }
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] * r))
    }

    /// `|z|²` as `a + b√5`.
    pub fn norm_sq(&self) -> QSqrt5 {
        let n = self * &self.conj();
        // A real element has no ζ term and equal-and-opposite ζ², ζ³ terms;
        // cos(2π/5) = (√5 − 1)/4.
        debug_assert!(n.0[1].is_zero() && (&n.0[2] + &n.0[3]).is_zero());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        QSqrt5 { a: &n.0[0] - &n.0[2] * &half, b: &n.0[2] * &half }
    }

    /// Evaluates a Laurent polynomial at `ζ`.
    pub fn eval(p: &LaurentPolynomial) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out = &out + &Self::zeta_pow(e).scale(&BigRational::from_integer(BigInt::from(c)));
        }
        out
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.0.iter().enumerate() {
            let v = rational_to_f64(c);
            let ang = k as f64 * std::f64::consts::PI / 5.0;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

impl Add for &Cyclo10 {
    type Output = Cyclo10;
    fn add(self, rhs: &Cyclo10) -> Cyclo10 {
        Cyclo10(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for &Cyclo10 {
    type Output = Cyclo10;
    fn sub(self, rhs: &Cyclo10) -> Cyclo10 {
        Cyclo10(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Mul for &Cyclo10 {
    type Output = Cyclo10;
    fn mul(self, rhs: &Cyclo10) -> Cyclo10 {
        let mut c = vec![BigRational::zero(); 7];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in rhs.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Cyclo10::reduce(c)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Real number `a + b√5` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSqrt5 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt5 {
    /// Exact sign test `a + b√5 ≤ x`.
    pub fn le_rational(&self, x: &BigRational) -> bool {
        let u = x - &self.a; // need u - b√5 >= 0
        let v = -self.b.clone();
        match (u.is_negative(), v.is_negative()) {
            (false, false) => true,
            (true, true) => false,
            // u >= 0 > v: u >= |v|√5
            (false, true) => &u * &u >= &v * &v * BigRational::from_integer(5.into()),
            // v >= 0 > u: v√5 >= |u|
            (true, false) => &v * &v * BigRational::from_integer(5.into()) >= &u * &u,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5f64.sqrt()
    }
}

/// Betti numbers with rational (perturbed) values.
pub type RationalBettiTable = BTreeMap<(i32, i32), BigRational>;

pub fn rational_table(b: &BettiTable) -> RationalBettiTable {
    b.entries.iter().map(|(&k, &(_, beta))| (k, BigRational::from_integer(BigInt::from(beta)))).collect()
}

/// `|χ̃(ζ) − χ(ζ)|` between a perturbed and an exact table.
#[derive(Debug, Clone)]
pub struct ReconstructionError {
    pub abs_sq: QSqrt5,
    pub value: f64,
}

impl ReconstructionError {
    /// Exact check `error ≤ bound` for a nonnegative rational bound.
    pub fn within(&self, bound: &BigRational) -> bool {
        self.abs_sq.le_rational(&(bound * bound))
    }
}

fn euler_at_zeta(t: &RationalBettiTable) -> Cyclo10 {
    let mut out = Cyclo10::zero();
    for (&(i, j), beta) in t {
        let term = Cyclo10::zeta_pow(j).scale(beta);
        out = if i.rem_euclid(2) == 0 { &out + &term } else { &out - &term };
    }
    out
}

/// Difference of the graded Euler characteristics at `ζ = e^{iπ/5}`.
pub fn kauffman_reconstruction_error(perturbed: &RationalBettiTable, exact: &BettiTable) -> ReconstructionError {
    let diff = &euler_at_zeta(perturbed) - &euler_at_zeta(&rational_table(exact));
    let abs_sq = diff.norm_sq();
    let value = abs_sq.to_f64().max(0.0).sqrt();
    ReconstructionError { abs_sq, value }
}

/// `(2m² + 5m + 3) ε`.
pub fn reconstruction_bound(m: usize, eps: &BigRational) -> BigRational {
    let m = m as i64;
    eps * BigRational::from_integer(BigInt::from(2 * m * m + 5 * m + 3))
}
