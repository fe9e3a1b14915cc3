//! Exact Chow weights and Donaldson–Futaki invariants from dimension/weight
//! tables of test configurations, with toric product-of-intervals
//! configurations as the data source. No floating point is used here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `"p/q"` with the denominator always written, e.g. `"0/1"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p"`, `"p/q"` (optionally signed, surrounding spaces ignored).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Validation(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// JSON form of a rational: an integer or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Int(i64),
    Text(String),
}

impl RationalRepr {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalRepr::Int(v) => Ok(int(*v)),
            RationalRepr::Text(s) => parse_rational(s),
        }
    }

    fn from_value(r: &Rational) -> Self {
        RationalRepr::Text(format_rational(r))
    }
}

/// `u ↦ slope·u + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub slope: Vec<Rational>,
    pub intercept: Rational,
}

impl AffinePiece {
    fn eval(&self, u: &[Rational]) -> Rational {
        self.slope
            .iter()
            .zip(u)
            .fold(self.intercept.clone(), |acc, (s, x)| acc + s * x)
    }

    /// `m·piece(u/m)` at an integer point.
    fn eval_homogeneous(&self, m: u32, u: &[BigInt]) -> Rational {
        let mut acc = &self.intercept * int(m as i64);
        for (s, x) in self.slope.iter().zip(u) {
            acc += s * Rational::from_integer(x.clone());
        }
        acc
    }
}

/// A toric test configuration: the box `Π [0, ℓ_j]` and a convex
/// piecewise-linear `g = max of affine pieces`. At level `m` the monomial
/// with exponent `u ∈ mP ∩ ℤⁿ` carries weight `sign · m·g(u/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToricConfigData {
    lengths: Vec<Rational>,
    pieces: Vec<AffinePiece>,
    sign: i8,
}

/// Grid resolution used to confirm that every piece is active somewhere.
const ACTIVITY_GRID: u32 = 64;

impl ToricConfigData {
    /// Every piece must attain the maximum somewhere on the box; a piece
    /// that never does describes a non-convex graph.
    pub fn new(lengths: Vec<Rational>, pieces: Vec<AffinePiece>, sign: i8) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::Validation("polytope needs at least one interval".into()));
        }
        if let Some(l) = lengths.iter().find(|l| !l.is_positive()) {
            return Err(Error::Validation(format!("interval length {} is not positive", format_rational(l))));
        }
        if pieces.is_empty() {
            return Err(Error::Validation("g needs at least one affine piece".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.slope.len() != lengths.len()) {
            return Err(Error::DimensionMismatch(p.slope.len(), lengths.len()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Validation(format!("weight sign must be ±1, got {sign}")));
        }
        let cfg = ToricConfigData {
            lengths,
            pieces,
            sign,
        };
        cfg.check_convex()?;
        Ok(cfg)
    }

    /// One-dimensional `g` through the given breakpoints `(u, g(u))`, which
    /// must start at 0, end at `length`, and have nondecreasing slopes.
    pub fn from_breakpoints(length: Rational, points: &[(Rational, Rational)], sign: i8) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Validation("need at least two breakpoints".into()));
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != length {
            return Err(Error::Validation("breakpoints must span [0, length]".into()));
        }
        let mut pieces = Vec::new();
        let mut last_slope: Option<Rational> = None;
        for w in points.windows(2) {
            let ((u0, g0), (u1, g1)) = (&w[0], &w[1]);
            if u1 <= u0 {
                return Err(Error::Validation("breakpoints must increase".into()));
            }
            let slope = (g1 - g0) / (u1 - u0);
            if let Some(prev) = &last_slope {
                if slope < *prev {
                    return Err(Error::Validation(format!(
                        "g is not convex: slope drops from {} to {} at u = {}",
                        format_rational(prev),
                        format_rational(&slope),
                        format_rational(u0)
                    )));
                }
            }
            let intercept = g0 - &slope * u0;
            last_slope = Some(slope.clone());
            pieces.push(AffinePiece {
                slope: vec![slope],
                intercept,
            });
        }
        ToricConfigData::new(vec![length], pieces, sign)
    }

    fn check_convex(&self) -> Result<()> {
        let n = self.dim();
        let mut active = vec![false; self.pieces.len()];
        let mut idx = vec![0u32; n];
        let steps = ACTIVITY_GRID;
        loop {
            let u: Vec<Rational> = idx
                .iter()
                .zip(&self.lengths)
                .map(|(&i, l)| l * Rational::new(BigInt::from(i), BigInt::from(steps)))
                .collect();
            let values: Vec<Rational> = self.pieces.iter().map(|p| p.eval(&u)).collect();
            let max = values.iter().max().expect("nonempty").clone();
            for (j, v) in values.iter().enumerate() {
                if *v == max {
                    active[j] = true;
                }
            }
            if !advance(&mut idx, &vec![steps; n]) {
                break;
            }
        }
        if let Some(j) = active.iter().position(|a| !a) {
            return Err(Error::Validation(format!(
                "affine piece {j} is never the maximum on the polytope, so the described g is not convex"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn g(&self, u: &[Rational]) -> Rational {
        self.pieces.iter().map(|p| p.eval(u)).max().expect("nonempty")
    }

    /// `c·g`, for checking homogeneity of the weights.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Validation("scale must be positive".into()));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| AffinePiece {
                slope: p.slope.iter().map(|s| s * c).collect(),
                intercept: &p.intercept * c,
            })
            .collect();
        ToricConfigData::new(self.lengths.clone(), pieces, self.sign)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ToricDocument =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let lengths = doc.lengths.iter().map(RationalRepr::value).collect::<Result<Vec<_>>>()?;
        let mut pieces = Vec::with_capacity(doc.pieces.len());
        for piece in &doc.pieces {
            let mut coeffs = piece.iter().map(RationalRepr::value).collect::<Result<Vec<_>>>()?;
            let intercept = coeffs
                .pop()
                .ok_or_else(|| Error::Validation("empty affine piece".into()))?;
            pieces.push(AffinePiece {
                slope: coeffs,
                intercept,
            });
        }
        ToricConfigData::new(lengths, pieces, doc.sign.unwrap_or(-1))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ToricDocument {
            lengths: self.lengths.iter().map(RationalRepr::from_value).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| {
                    p.slope
                        .iter()
                        .chain(std::iter::once(&p.intercept))
                        .map(RationalRepr::from_value)
                        .collect()
                })
                .collect(),
            sign: Some(self.sign),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// `{lengths[], pieces: [[slope…, intercept]…], sign}`; the sign defaults to −1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToricDocument {
    pub lengths: Vec<RationalRepr>,
    pub pieces: Vec<Vec<RationalRepr>>,
    #[serde(default)]
    pub sign: Option<i8>,
}

/// Odometer increment over `0..=bounds[j]`; false once exhausted.
fn advance(idx: &mut [u32], bounds: &[u32]) -> bool {
    for j in 0..idx.len() {
        if idx[j] < bounds[j] {
            idx[j] += 1;
            return true;
        }
        idx[j] = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub m: u32,
    /// `N_m`, the number of sections at level `m`.
    pub dimension: BigInt,
    /// `w_m`, the total weight at level `m`.
    pub weight: Rational,
}

/// Dimensions and total weights for `m = 1..=m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    n: usize,
    rows: Vec<WeightRow>,
}

impl WeightTable {
    pub fn new(n: usize, rows: Vec<WeightRow>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("dimension must be positive".into()));
        }
        if rows.len() < n + 3 {
            return Err(Error::InvalidTable(format!(
                "{} rows are too few for dimension {n} (need {})",
                rows.len(),
                n + 3
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.m as usize != i + 1 {
                return Err(Error::InvalidTable("levels must run 1, 2, … without gaps".into()));
            }
            if !row.dimension.is_positive() {
                return Err(Error::InvalidTable(format!("N_{} is not positive", row.m)));
            }
        }
        if rows.windows(2).any(|w| w[1].dimension <= w[0].dimension) {
            return Err(Error::InvalidTable("N_m must be strictly increasing".into()));
        }
        Ok(WeightTable { n, rows })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[WeightRow] {
        &self.rows
    }

    pub fn m_max(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn row(&self, m: u32) -> Result<&WeightRow> {
        if m == 0 || m > self.m_max() {
            return Err(Error::Validation(format!(
                "level {m} outside the table range 1..={}",
                self.m_max()
            )));
        }
        Ok(&self.rows[m as usize - 1])
    }
}

/// Enumerates `mP ∩ ℤⁿ` for every `m ≤ m_max`.
pub fn toric_weight_table(cfg: &ToricConfigData, m_max: u32) -> Result<WeightTable> {
    let n = cfg.dim();
    if (m_max as usize) < n + 3 {
        return Err(Error::Validation(format!("m_max must be at least {}", n + 3)));
    }
    let sign = int(cfg.sign as i64);
    let mut rows = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let bounds: Vec<u32> = cfg
            .lengths
            .iter()
            .map(|l| {
                let top = (l * int(m as i64)).floor().to_integer();
                u32::try_from(top).map_err(|_| Error::Validation("polytope too large".into()))
            })
            .collect::<Result<_>>()?;
        let mut idx = vec![0u32; n];
        let mut count = BigInt::zero();
        let mut weight = Rational::zero();
        loop {
            let u: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(i)).collect();
            let g = cfg
                .pieces
                .iter()
                .map(|p| p.eval_homogeneous(m, &u))
                .max()
                .expect("nonempty");
            weight += g;
            count += 1;
            if !advance(&mut idx, &bounds) {
                break;
            }
        }
        rows.push(WeightRow {
            m,
            dimension: count,
            weight: &sign * weight,
        });
    }
    WeightTable::new(n, rows)
}

/// Leading coefficients of `N_m = a0 mⁿ + a1 mⁿ⁻¹ + …` and
/// `w_m = b0 mⁿ⁺¹ + b1 mⁿ + …`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    pub a0: Rational,
    pub a1: Rational,
    pub b0: Rational,
    pub b1: Rational,
    /// 1 for polynomials, 2 for quasi-polynomials with parity-dependent
    /// lower terms.
    pub fit_period: u32,
}

/// Monomial coefficients (constant first) of the degree-`degree`
/// interpolant through the points, by exact Gaussian elimination.
fn interpolate(points: &[(u32, Rational)], degree: usize) -> Result<Vec<Rational>> {
    let size = degree + 1;
    if points.len() < size {
        return Err(Error::InvalidTable(format!(
            "{} points cannot determine a degree-{degree} polynomial",
            points.len()
        )));
    }
    let mut rows: Vec<Vec<Rational>> = points[..size]
        .iter()
        .map(|(m, v)| {
            let mut row: Vec<Rational> = (0..size).map(|p| int(*m as i64).pow(p as i32)).collect();
            row.push(v.clone());
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::InvalidTable("repeated interpolation nodes".into()))?;
        rows.swap(col, pivot);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..size {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..=size {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[size].clone()).collect())
}

fn poly_at(coeffs: &[Rational], m: u32) -> Rational {
    let x = int(m as i64);
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
}

/// Fits one sequence; returns the top two coefficients and the period.
fn fit_sequence(points: &[(u32, Rational)], degree: usize) -> Result<(Rational, Rational, u32)> {
    let top = |c: &[Rational]| (c[degree].clone(), if degree > 0 { c[degree - 1].clone() } else { Rational::zero() });
    let coeffs = interpolate(points, degree)?;
    if points.iter().all(|(m, v)| poly_at(&coeffs, *m) == *v) {
        let (c0, c1) = top(&coeffs);
        return Ok((c0, c1, 1));
    }
    let mut leading = Vec::new();
    for parity in 0..2 {
        let class: Vec<(u32, Rational)> =
            points.iter().filter(|(m, _)| m % 2 == parity).cloned().collect();
        let coeffs = interpolate(&class, degree)?;
        if class.iter().any(|(m, v)| poly_at(&coeffs, *m) != *v) {
            return Err(Error::InvalidTable(
                "sequence is not a quasi-polynomial of period at most 2".into(),
            ));
        }
        leading.push(top(&coeffs));
    }
    if leading[0] != leading[1] {
        return Err(Error::InvalidTable(
            "leading coefficients differ between parity classes".into(),
        ));
    }
    let (c0, c1) = leading.swap_remove(0);
    Ok((c0, c1, 2))
}

pub fn fit_expansion(t: &WeightTable) -> Result<ExpansionCoefficients> {
    let n = t.dim();
    let dims: Vec<(u32, Rational)> = t
        .rows
        .iter()
        .map(|r| (r.m, Rational::from_integer(r.dimension.clone())))
        .collect();
    let weights: Vec<(u32, Rational)> = t.rows.iter().map(|r| (r.m, r.weight.clone())).collect();
    let (a0, a1, pa) = fit_sequence(&dims, n)?;
    let (b0, b1, pb) = fit_sequence(&weights, n + 1)?;
    if !a0.is_positive() {
        return Err(Error::InvalidTable("volume coefficient a0 must be positive".into()));
    }
    Ok(ExpansionCoefficients {
        a0,
        a1,
        b0,
        b1,
        fit_period: pa.max(pb),
    })
}

/// `k·b0 − a0·w_k/N_k`.
pub fn chow_weight(k: u32, c: &ExpansionCoefficients, t: &WeightTable) -> Result<Rational> {
    let row = t.row(k)?;
    Ok(int(k as i64) * &c.b0 - &c.a0 * &row.weight / Rational::from_integer(row.dimension.clone()))
}

/// `(a1·b0 − a0·b1)/a0`.
pub fn df_invariant(c: &ExpansionCoefficients) -> Result<Rational> {
    if !c.a0.is_positive() {
        return Err(Error::Validation("a0 must be positive".into()));
    }
    Ok((&c.a1 * &c.b0 - &c.a0 * &c.b1) / &c.a0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChowLimitReport {
    pub table: WeightTable,
    pub coefficients: ExpansionCoefficients,
    pub df: Rational,
    /// `Chow_m` for `m = 1..=m_max`.
    pub chow: Vec<Rational>,
    /// `max |Chow_m − DF|` over `m ∈ [m_max/2, m_max]`.
    pub tail_error: Rational,
    /// `max m·|Chow_m − DF|` over the tail window, the fitted constant `K`.
    pub k_tail: Rational,
    /// The same over `[m_max/4, m_max/2)`.
    pub k_half: Rational,
}

/// Checks `|Chow_m − DF| ≤ K/m` on the tail of the table. The sequence is
/// declared divergent when the constant needed on the last half exceeds
/// twice the constant of the preceding quarter.
pub fn chow_limit_check(cfg: &ToricConfigData, m_max: u32) -> Result<ChowLimitReport> {
    if m_max < 10 {
        return Err(Error::Validation("m_max must be at least 10".into()));
    }
    let table = toric_weight_table(cfg, m_max)?;
    let coefficients = fit_expansion(&table)?;
    let df = df_invariant(&coefficients)?;
    let chow = (1..=m_max)
        .map(|m| chow_weight(m, &coefficients, &table))
        .collect::<Result<Vec<_>>>()?;
    let scaled = |m: u32| int(m as i64) * (&chow[m as usize - 1] - &df).abs();
    let tail = (m_max / 2)..=m_max;
    let half = (m_max / 4).max(1)..(m_max / 2);
    let tail_error = tail
        .clone()
        .map(|m| (&chow[m as usize - 1] - &df).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let k_tail = tail.map(scaled).max().unwrap_or_else(Rational::zero);
    let k_half = half.map(scaled).max().unwrap_or_else(Rational::zero);
    if k_tail > int(2) * &k_half {
        return Err(Error::InvalidTable(format!(
            "Chow weights do not approach DF at rate 1/m (tail constant {} vs {})",
            format_rational(&k_tail),
            format_rational(&k_half)
        )));
    }
    Ok(ChowLimitReport {
        table,
        coefficients,
        df,
        chow,
        tail_error,
        k_tail,
        k_half,
    })
}

/// Whether `Chow_m = DF` for every `m` (as for product configurations).
pub fn is_identically_df(report: &ChowLimitReport) -> bool {
    report.chow.iter().all(|c| *c == report.df)
}
