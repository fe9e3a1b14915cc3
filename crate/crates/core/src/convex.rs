//! Convex functions along geodesics: one-sided derivatives, chord slopes at
//! infinity, properness certificates, geodesic descent, and the
//! critical-point/slope decision procedure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hermitian::{
    connecting_direction, distance, geodesic_point, random_direction, random_form, HermitianForm,
    TangentDirection,
};

/// A real function of the geodesic parameter.
pub trait RayFunction {
    fn eval(&self, t: f64) -> Result<f64>;

    /// Exact `lim f(t)/t`, when the function knows it.
    fn exact_slope(&self) -> Option<f64> {
        None
    }
}

/// Adapter turning a closure into a [`RayFunction`].
pub struct FnRay<F>(pub F);

impl<F: Fn(f64) -> f64> RayFunction for FnRay<F> {
    fn eval(&self, t: f64) -> Result<f64> {
        let v = (self.0)(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("ray function value"))
        }
    }
}

/// `t ↦ f(H0^{1/2} exp(tA) H0^{1/2})` for a function on the space of forms.
pub struct GeodesicRestriction<'a, F> {
    pub f: F,
    pub base: &'a HermitianForm,
    pub direction: &'a TangentDirection,
}

impl<F: Fn(&HermitianForm) -> Result<f64>> RayFunction for GeodesicRestriction<'_, F> {
    fn eval(&self, t: f64) -> Result<f64> {
        (self.f)(&geodesic_point(self.base, self.direction, t)?)
    }
}

fn roundoff(values: &[f64], h: f64) -> f64 {
    8.0 * f64::EPSILON * values.iter().map(|v| v.abs()).sum::<f64>() / h
}

/// Left and right derivatives at `tau` from monotone difference quotients.
///
/// Steps halve from `1/8` down to `h_min`. Right quotients must not increase
/// and left quotients must not decrease as the step shrinks; the last value
/// whose round-off estimate stays small is returned.
pub fn one_sided_derivatives<R: RayFunction + ?Sized>(
    f: &R,
    tau: f64,
    h_min: f64,
) -> Result<(f64, f64)> {
    if !(h_min > 0.0) {
        return Err(Error::Precondition("h_min must be positive".into()));
    }
    let f0 = f.eval(tau)?;
    let mut h = 0.125f64.max(h_min);
    let mut left: Option<(f64, f64)> = None;
    let mut right: Option<(f64, f64)> = None;
    loop {
        let fp = f.eval(tau + h)?;
        let fm = f.eval(tau - h)?;
        let noise = roundoff(&[f0, fp.max(fm)], h);
        let q_right = (fp - f0) / h;
        let q_left = (f0 - fm) / h;
        // Once round-off approaches the change between successive quotients
        // the smaller step carries no information. The factor 10 covers
        // evaluations whose own error exceeds a few ulps of the value.
        let stable = match (left, right) {
            (Some((pl, _)), Some((pr, _))) => {
                10.0 * noise <= (q_right - pr).abs().max((q_left - pl).abs())
            }
            _ => true,
        };
        if let Some((prev, prev_h)) = right {
            let tol = 1e-10 * (1.0 + prev.abs()) + 2.0 * noise;
            if q_right > prev + tol {
                return Err(Error::ConvexityViolation {
                    t0: tau,
                    t1: tau + h,
                    t2: tau + prev_h,
                    excess: q_right - prev,
                });
            }
        }
        if let Some((prev, prev_h)) = left {
            let tol = 1e-10 * (1.0 + prev.abs()) + 2.0 * noise;
            if q_left < prev - tol {
                return Err(Error::ConvexityViolation {
                    t0: tau - prev_h,
                    t1: tau - h,
                    t2: tau,
                    excess: prev - q_left,
                });
            }
        }
        if !stable && right.is_some() {
            break;
        }
        right = Some((q_right, h));
        left = Some((q_left, h));
        if h / 2.0 < h_min {
            break;
        }
        h /= 2.0;
    }
    let (l, _) = left.expect("at least one step");
    let (r, last_h) = right.expect("at least one step");
    let noise = roundoff(&[f0, f0], last_h);
    if l > r + 1e-9 * (1.0 + r.abs()) + 2.0 * noise {
        return Err(Error::ConvexityViolation {
            t0: tau - h,
            t1: tau,
            t2: tau + h,
            excess: l - r,
        });
    }
    Ok((l, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    /// Largest excess of `f` over the chord of its neighbours (0 if none).
    pub max_violation: f64,
    /// Smallest second difference `2·(chord − f)` over consecutive triples;
    /// on a uniform grid this is `f(t-h) − 2f(t) + f(t+h)`.
    pub strict_margin: f64,
}

pub fn convexity_report<R: RayFunction + ?Sized>(f: &R, grid: &[f64]) -> Result<ConvexityReport> {
    if grid.len() < 3 {
        return Err(Error::Precondition("grid needs at least three points".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("grid must be strictly increasing".into()));
    }
    let values = grid.iter().map(|&t| f.eval(t)).collect::<Result<Vec<_>>>()?;
    let mut max_violation = 0.0f64;
    let mut strict_margin = f64::INFINITY;
    for i in 1..grid.len() - 1 {
        let (t0, t1, t2) = (grid[i - 1], grid[i], grid[i + 1]);
        let w = (t1 - t0) / (t2 - t0);
        let chord = (1.0 - w) * values[i - 1] + w * values[i + 1];
        let gap = chord - values[i];
        max_violation = max_violation.max(-gap);
        strict_margin = strict_margin.min(2.0 * gap);
    }
    Ok(ConvexityReport {
        max_violation,
        strict_margin,
    })
}

/// Value of a slope at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    PlusInfinity,
}

impl Slope {
    pub fn is_positive(&self) -> bool {
        match self {
            Slope::Finite(v) => *v > 0.0,
            Slope::PlusInfinity => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub value: Slope,
    /// Chord slope on the trailing window (finite even for `PlusInfinity`).
    pub chord: f64,
    pub window: (f64, f64),
    /// `|chord(t1, t2) − chord(t1/2, t2/2)|`.
    pub drift: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SlopeConfig {
    /// Left end of the trailing window as a fraction of `t_max`.
    pub window_start: f64,
    /// Chord slopes above this that keep increasing are reported as `+∞`.
    pub cap: f64,
    /// Number of halved windows checked for chord monotonicity.
    pub levels: usize,
}

impl Default for SlopeConfig {
    fn default() -> Self {
        SlopeConfig {
            window_start: 2.0 / 3.0,
            cap: 1e6,
            levels: 6,
        }
    }
}

pub fn asymptotic_slope<R: RayFunction + ?Sized>(f: &R, t_max: f64, tol: f64) -> Result<SlopeEstimate> {
    asymptotic_slope_with(f, t_max, tol, &SlopeConfig::default())
}

/// Chord slope on `[window_start·t_max, t_max]` with a doubling-window drift
/// test. Chords on successively halved windows must be nonincreasing,
/// otherwise the function is not convex.
pub fn asymptotic_slope_with<R: RayFunction + ?Sized>(
    f: &R,
    t_max: f64,
    tol: f64,
    config: &SlopeConfig,
) -> Result<SlopeEstimate> {
    if !(t_max > 0.0) || !(tol > 0.0) {
        return Err(Error::Precondition("t_max and tol must be positive".into()));
    }
    let levels = config.levels.max(2);
    let mut chords = Vec::with_capacity(levels);
    let mut windows = Vec::with_capacity(levels);
    let mut noise = Vec::with_capacity(levels);
    let mut t2 = t_max;
    for _ in 0..levels {
        let t1 = config.window_start * t2;
        let (f1, f2) = (f.eval(t1)?, f.eval(t2)?);
        chords.push((f2 - f1) / (t2 - t1));
        windows.push((t1, t2));
        noise.push(roundoff(&[f1, f2], t2 - t1));
        t2 /= 2.0;
    }
    for j in 0..levels - 1 {
        let tol_mono = 1e-10 * (1.0 + chords[j].abs()) + noise[j] + noise[j + 1];
        if chords[j + 1] > chords[j] + tol_mono {
            let (a, b) = windows[j + 1];
            return Err(Error::ConvexityViolation {
                t0: a,
                t1: b,
                t2: windows[j].1,
                excess: chords[j + 1] - chords[j],
            });
        }
    }
    let chord = chords[0];
    let drift = (chords[0] - chords[1]).abs();
    let value = if chord > config.cap && chords[0] > chords[1] {
        Slope::PlusInfinity
    } else {
        Slope::Finite(chord)
    };
    Ok(SlopeEstimate {
        value,
        chord,
        window: windows[0],
        drift,
        converged: drift <= tol,
    })
}

/// A function on the space of forms with its Riemannian gradient in the
/// normalized frame: `d/dt f(H^{1/2} e^{tA} H^{1/2})|₀ = tr(A·G)`.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, h: &HermitianForm) -> Result<f64>;
    fn gradient(&self, h: &HermitianForm) -> Result<TangentDirection>;

    /// Exact slope at infinity along `H0^{1/2} e^{tA} H0^{1/2}`, if known.
    fn exact_slope(&self, _h0: &HermitianForm, _a: &TangentDirection) -> Option<Result<f64>> {
        None
    }
}

/// Closure-backed [`Objective`] without a slope oracle.
pub struct FnObjective<F, G> {
    pub dim: usize,
    pub value: F,
    pub gradient: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&HermitianForm) -> Result<f64> + Sync,
    G: Fn(&HermitianForm) -> Result<TangentDirection> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, h: &HermitianForm) -> Result<f64> {
        (self.value)(h)
    }
    fn gradient(&self, h: &HermitianForm) -> Result<TangentDirection> {
        (self.gradient)(h)
    }
}

#[derive(Debug, Clone)]
pub struct Probe {
    pub point: HermitianForm,
    pub value: f64,
    pub distance: f64,
}

/// Constants with `f(y) ≥ C·d(y, y0) − D`.
#[derive(Debug, Clone)]
pub struct PropernessCertificate {
    pub c: f64,
    pub d: f64,
    pub base: HermitianForm,
    pub probes: Vec<Probe>,
    /// `min over probes of f − (C·d − D)`.
    pub residual: f64,
    /// Smallest estimated slope over the probe directions.
    pub min_probe_slope: f64,
    /// `min of f − (C·d − D)` over the random validation points.
    pub validation_residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PropernessOptions {
    pub samples_per_ray: usize,
    pub validation_points: usize,
    pub slope_tol: f64,
    pub seed: u64,
}

impl Default for PropernessOptions {
    fn default() -> Self {
        PropernessOptions {
            samples_per_ray: 32,
            validation_points: 1000,
            slope_tol: 1e-6,
            seed: 0,
        }
    }
}

/// Estimates `C` and `D` from rays through the given unit directions and
/// validates the bound at random points of the ball of radius `t_max`.
///
/// A direction whose estimated slope is `≤ 0` aborts with
/// [`Error::NotProper`], carrying that direction as a destabilizing witness.
pub fn properness_certificate<F>(
    f: F,
    y0: &HermitianForm,
    directions: &[TangentDirection],
    t_max: f64,
    opts: &PropernessOptions,
) -> Result<PropernessCertificate>
where
    F: Fn(&HermitianForm) -> Result<f64>,
{
    if directions.is_empty() {
        return Err(Error::Precondition("no probe directions".into()));
    }
    let mut min_slope = f64::INFINITY;
    for (index, dir) in directions.iter().enumerate() {
        if (dir.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("direction {index} is not unit norm")));
        }
        let ray = GeodesicRestriction {
            f: &f,
            base: y0,
            direction: dir,
        };
        let est = asymptotic_slope(&ray, t_max, opts.slope_tol)?;
        if est.chord <= 0.0 {
            return Err(Error::NotProper {
                index,
                slope: est.chord,
                direction: Box::new(dir.clone()),
            });
        }
        min_slope = min_slope.min(est.chord);
    }
    let c = 0.5 * min_slope;
    let steps = opts.samples_per_ray.max(2);
    let mut probes = Vec::with_capacity(directions.len() * (steps + 1));
    for dir in directions {
        for j in 0..=steps {
            let t = t_max * j as f64 / steps as f64;
            let point = geodesic_point(y0, dir, t)?;
            let value = f(&point)?;
            probes.push(Probe {
                point,
                value,
                distance: t,
            });
        }
    }
    let scale = probes.iter().map(|p| p.value.abs()).fold(1.0, f64::max);
    let excess = probes
        .iter()
        .map(|p| c * p.distance - p.value)
        .fold(f64::NEG_INFINITY, f64::max);
    // Slack for directions between the probes.
    let d = 1.05 * excess.max(0.0) + 1e-9 * scale;
    let residual = probes
        .iter()
        .map(|p| p.value - (c * p.distance - d))
        .fold(f64::INFINITY, f64::min);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut validation_residual = f64::INFINITY;
    for _ in 0..opts.validation_points {
        use rand::Rng;
        let dir = random_direction(y0.dim(), &mut rng);
        let r = t_max * rng.gen::<f64>();
        let point = geodesic_point(y0, &dir, r)?;
        let gap = f(&point)? - (c * distance(y0, &point)? - d);
        validation_residual = validation_residual.min(gap);
    }
    if validation_residual < 0.0 {
        return Err(Error::Validation(format!(
            "properness bound fails at a validation point (residual {validation_residual:e})"
        )));
    }
    Ok(PropernessCertificate {
        c,
        d,
        base: y0.clone(),
        probes,
        residual,
        min_probe_slope: min_slope,
        validation_residual,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Initial (and maximal growth base) step along the negative gradient.
    pub step: f64,
    pub max_step: f64,
    pub max_iter: usize,
    /// Stop when `‖grad‖_F ≤ stat_tol`.
    pub stat_tol: f64,
    /// Condition number beyond which iterates are declared divergent.
    pub cond_cap: f64,
    /// Distance from the start beyond which iterates are declared divergent.
    pub divergence_radius: f64,
    /// Keep `det H = det H_init` along the iteration.
    pub normalize_det: bool,
    /// Seed for the finite-difference gradient check direction.
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            step: 1.0,
            max_step: 1e4,
            max_iter: 20_000,
            stat_tol: 1e-9,
            cond_cap: 1e12,
            divergence_radius: 1e3,
            normalize_det: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSummary {
    pub iterations: usize,
    pub last_value: f64,
    pub last_condition: f64,
    pub last_distance: f64,
    /// Exact slope of the raw escape direction before any integral rounding.
    pub escape_slope: f64,
}

#[derive(Debug, Clone)]
pub enum ExistenceVerdict {
    Minimizer {
        point: HermitianForm,
        gradient_norm: f64,
        value: f64,
        iterations: usize,
    },
    Degenerate {
        direction: TangentDirection,
        certified_slope: f64,
        witness_iterates: WitnessSummary,
    },
}

impl ExistenceVerdict {
    pub fn is_minimizer(&self) -> bool {
        matches!(self, ExistenceVerdict::Minimizer { .. })
    }
}

/// Central-difference check of `tr(A·G)` against the values of `f`.
pub fn check_gradient<O: Objective + ?Sized>(
    obj: &O,
    h: &HermitianForm,
    a: &TangentDirection,
    step: f64,
) -> Result<(f64, f64)> {
    let plus = obj.value(&geodesic_point(h, a, step)?)?;
    let minus = obj.value(&geodesic_point(h, a, -step)?)?;
    let fd = (plus - minus) / (2.0 * step);
    let g = obj.gradient(h)?;
    Ok((fd, a.pairing(g.matrix())))
}

/// Candidate destabilizing directions around an escape direction: the
/// direction itself, then two-level generators with integer eigenvalues
/// built from its eigenvectors at every spectral split.
fn escape_candidates(escape: &TangentDirection) -> Result<Vec<TangentDirection>> {
    let mut out = vec![escape.clone()];
    let spec = escape.spectrum();
    let n = spec.values.len();
    for split in 1..n {
        let values: Vec<f64> = (0..n)
            .map(|i| {
                if i < split {
                    -((n - split) as f64)
                } else {
                    split as f64
                }
            })
            .collect();
        out.push(TangentDirection::from_spectrum(&spec.vectors, &values)?.normalized()?);
    }
    Ok(out)
}

/// Picks the most negative exact slope among the escape candidates.
fn certify_escape<O: Objective + ?Sized>(
    obj: &O,
    base: &HermitianForm,
    escape: &TangentDirection,
) -> Result<(TangentDirection, f64, f64)> {
    let mut best: Option<(TangentDirection, f64)> = None;
    let mut escape_slope = f64::NAN;
    for (i, cand) in escape_candidates(escape)?.into_iter().enumerate() {
        let slope = obj.exact_slope(base, &cand).ok_or_else(|| {
            Error::Precondition("divergence detected but the objective has no slope oracle".into())
        })??;
        if i == 0 {
            escape_slope = slope;
        }
        if best.as_ref().map_or(true, |(_, s)| slope < *s) {
            best = Some((cand, slope));
        }
    }
    let (dir, slope) = best.expect("at least one candidate");
    Ok((dir, slope, escape_slope))
}

/// Geodesic gradient descent `H ← γ_{H,−G}(s)` with backtracking.
///
/// Returns a minimizer once `‖G‖_F ≤ stat_tol`. When iterates leave every
/// bounded set (condition number or distance beyond the caps) the traceless
/// normalized log of the last iterate relative to the start is certified
/// through the objective's exact slope and returned as a degenerate
/// direction.
pub fn minimize_convex<O: Objective + ?Sized>(
    obj: &O,
    h_init: &HermitianForm,
    opts: &MinimizeOptions,
) -> Result<ExistenceVerdict> {
    if h_init.dim() != obj.dim() {
        return Err(Error::DimensionMismatch(h_init.dim(), obj.dim()));
    }
    let n = h_init.dim();
    let log_det0 = h_init.log_det();
    let renorm = |h: HermitianForm| -> Result<HermitianForm> {
        if opts.normalize_det {
            let shift = (log_det0 - h.log_det()) / n as f64;
            h.scaled(shift.exp())
        } else {
            Ok(h)
        }
    };

    // Gradient contract at the start.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let probe_dir = random_direction(n, &mut rng);
    let f0 = obj.value(h_init)?;
    let (fd, an) = check_gradient(obj, h_init, &probe_dir, 1e-5)?;
    let floor = 1e-8 * (1.0 + f0.abs());
    if (fd - an).abs() > 1e-4 * fd.abs().max(an.abs()) + floor {
        return Err(Error::Contract(format!(
            "gradient disagrees with finite differences: {an:e} vs {fd:e}"
        )));
    }

    let mut h = h_init.clone();
    let mut value = f0;
    let mut step = opts.step;
    let mut g = obj.gradient(&h)?;
    for iter in 0..opts.max_iter {
        let gn = g.norm();
        if gn <= opts.stat_tol {
            return Ok(ExistenceVerdict::Minimizer {
                point: h,
                gradient_norm: gn,
                value,
                iterations: iter,
            });
        }
        let cond = h.condition_number();
        let dist = distance(h_init, &h)?;
        if cond > opts.cond_cap || dist > opts.divergence_radius {
            let escape = connecting_direction(h_init, &h)?.traceless().normalized()?;
            let (direction, certified_slope, escape_slope) = certify_escape(obj, h_init, &escape)?;
            if certified_slope > 0.0 {
                return Err(Error::InvariantViolation(format!(
                    "iterates diverged but every escape candidate has positive slope \
                     (best {certified_slope:e})"
                )));
            }
            return Ok(ExistenceVerdict::Degenerate {
                direction,
                certified_slope,
                witness_iterates: WitnessSummary {
                    iterations: iter,
                    last_value: value,
                    last_condition: cond,
                    last_distance: dist,
                    escape_slope,
                },
            });
        }
        let descent = g.scaled(-1.0);
        // One step may not push the condition number past the cap by more
        // than a factor `cond_cap`, which keeps trial points representable.
        let spread = {
            let values = g.spectrum().values;
            values.last().copied().unwrap_or(0.0) - values.first().copied().unwrap_or(0.0)
        };
        if spread > 0.0 {
            step = step.min(opts.cond_cap.ln() / spread);
        }
        let noise = 16.0 * f64::EPSILON * (1.0 + value.abs());
        let mut accepted = None;
        while step >= 1e-16 {
            let cand = renorm(geodesic_point(&h, &descent, step)?)?;
            let fc = obj.value(&cand)?;
            let predicted = step * gn * gn;
            if predicted > 100.0 * noise {
                if fc <= value - 1e-4 * predicted {
                    accepted = Some((cand, fc, None));
                    break;
                }
            } else if fc <= value + noise {
                // Value differences are round-off: require the gradient to shrink.
                let gc = obj.gradient(&cand)?;
                if gc.norm() < gn {
                    accepted = Some((cand, fc, Some(gc)));
                    break;
                }
            }
            step *= 0.5;
        }
        let (cand, fc, gc) = accepted.ok_or_else(|| {
            Error::Contract(format!("no descent step found at gradient norm {gn:e}"))
        })?;
        if fc > value + noise {
            return Err(Error::Contract(format!(
                "objective increased along an accepted step: {value} -> {fc}"
            )));
        }
        let g_next = match gc {
            Some(gc) => gc,
            None => obj.gradient(&cand)?,
        };
        // Barzilai–Borwein trial step from the secant pair (−step·G, ΔG),
        // comparing gradients in the normalized frames of neighbouring points.
        let curvature = -step * g.pairing(&(g_next.matrix() - g.matrix()));
        let moved = step * step * gn * gn;
        step = if curvature > 0.0 {
            (moved / curvature).clamp(1e-8, opts.max_step)
        } else {
            (2.0 * step).min(opts.max_step)
        };
        h = cand;
        value = fc;
        g = g_next;
    }
    Err(Error::Contract(format!(
        "descent did not reach stationarity within {} iterations",
        opts.max_iter
    )))
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    pub minimize: MinimizeOptions,
    /// Random non-scalar directions whose exact slopes must be positive at a
    /// minimizer.
    pub slope_probes: usize,
    pub seed: u64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            minimize: MinimizeOptions {
                normalize_det: true,
                ..MinimizeOptions::default()
            },
            slope_probes: 100,
            seed: 0,
        }
    }
}

/// Decides whether a scale-invariant convex energy has a critical point.
///
/// The descent runs on det-normalized iterates. A minimizer is confirmed by
/// positive exact slopes along random non-scalar rays based at random
/// points; a divergent run is confirmed by a nonpositive exact slope.
pub fn decide_existence<O: Objective + ?Sized>(
    energy: &O,
    h_init: &HermitianForm,
    opts: &DecideOptions,
) -> Result<ExistenceVerdict> {
    let n = energy.dim();
    let f = energy.value(h_init)?;
    for c in [1e-3, 1e3] {
        let fc = energy.value(&h_init.scaled(c)?)?;
        if (fc - f).abs() > 1e-9 * f.abs().max(1.0) {
            return Err(Error::Precondition(format!(
                "energy is not scale invariant: f(cH) - f(H) = {:e} at c = {c}",
                fc - f
            )));
        }
    }
    if energy.exact_slope(h_init, &TangentDirection::zero(n)).is_none() {
        return Err(Error::Precondition("energy must expose an exact slope".into()));
    }
    let mut mopts = opts.minimize;
    mopts.normalize_det = true;
    let verdict = minimize_convex(energy, h_init, &mopts)?;
    match &verdict {
        ExistenceVerdict::Minimizer { point, .. } => {
            if n > 1 {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                for _ in 0..opts.slope_probes {
                    let base = geodesic_point(point, &random_direction(n, &mut rng), 1.0)?;
                    let dir = random_direction(n, &mut rng).traceless().normalized()?;
                    let slope = energy
                        .exact_slope(&base, &dir)
                        .expect("oracle presence checked")?;
                    if !(slope > 0.0) {
                        return Err(Error::InvariantViolation(format!(
                            "minimizer found but a non-scalar ray has slope {slope:e}"
                        )));
                    }
                }
            }
        }
        ExistenceVerdict::Degenerate {
            certified_slope, ..
        } => {
            if !(*certified_slope <= 0.0) {
                return Err(Error::InvariantViolation(
                    "degenerate verdict without a nonpositive slope".into(),
                ));
            }
        }
    }
    Ok(verdict)
}

/// Outcome of [`liminf_harness`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiminfReport {
    pub limit_slope: f64,
    /// `f(γ_i(τ_i))/τ_i` for every ray in the family.
    pub ratios: Vec<f64>,
    /// `d(γ_i(1), γ*(1))` for every ray.
    pub gaps: Vec<f64>,
    /// Minimum ratio over `i ≥ i0`.
    pub floor: f64,
    /// `limit_slope / 4`.
    pub threshold: f64,
    pub passed: bool,
}

/// Checks that rays converging to a ray of positive slope have
/// `liminf f(γ_i(τ_i))/τ_i` above a quarter of that slope.
///
/// `family` holds unit directions at the common base and the parameters
/// `τ_i`; the limit slope is estimated on `[2/3·t_max, t_max]`.
pub fn liminf_harness<F>(
    f: F,
    base: &HermitianForm,
    family: &[(TangentDirection, f64)],
    limit: &TangentDirection,
    i0: usize,
    t_max: f64,
) -> Result<LiminfReport>
where
    F: Fn(&HermitianForm) -> Result<f64>,
{
    if i0 >= family.len() {
        return Err(Error::Precondition("i0 beyond the family".into()));
    }
    if family.windows(2).any(|w| !(w[1].1 > w[0].1)) {
        return Err(Error::Precondition("τ_i must increase".into()));
    }
    let ray = GeodesicRestriction {
        f: &f,
        base,
        direction: limit,
    };
    let est = asymptotic_slope(&ray, t_max, 1e-6)?;
    let limit_slope = est.chord;
    if !(limit_slope > 0.0) {
        return Err(Error::Precondition(format!(
            "limit ray must have positive slope, got {limit_slope:e}"
        )));
    }
    let target = geodesic_point(base, limit, 1.0)?;
    let mut ratios = Vec::with_capacity(family.len());
    let mut gaps = Vec::with_capacity(family.len());
    for (dir, tau) in family {
        ratios.push(f(&geodesic_point(base, dir, *tau)?)? / tau);
        gaps.push(distance(&geodesic_point(base, dir, 1.0)?, &target)?);
    }
    let floor = ratios[i0..].iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = limit_slope / 4.0;
    Ok(LiminfReport {
        limit_slope,
        ratios,
        gaps,
        floor,
        threshold,
        passed: floor >= threshold,
    })
}

/// Random point near `center` used as a probe base.
pub fn random_base<R: rand::Rng + ?Sized>(center: &HermitianForm, rng: &mut R) -> Result<HermitianForm> {
    let n = center.dim();
    let offset = random_form(n, 1.0, rng);
    let a = connecting_direction(&HermitianForm::identity(n), &offset)?;
    geodesic_point(center, &a, 1.0)
}
