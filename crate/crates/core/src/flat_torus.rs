//! Lattice toolkit for Euclidean tori: systole, short bases, coefficient
//! bounds, the intersection inequality, covering indices, and kernel bases.
//!
//! A flat torus is `ℝ²/Λ` for the lattice `Λ = ℤu + ℤv`; homotopy classes are
//! integer coefficient pairs in the `(u, v)` basis and the geodesic length of
//! a class is the Euclidean norm of the corresponding lattice vector. The
//! algebraic intersection number is `Δ((a,b),(c,d)) = ad − bc`.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatTorus {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

/// Homotopy class `a·[u] + b·[v]` on a flat torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusClass {
    pub a: i64,
    pub b: i64,
}

impl TorusClass {
    pub fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for TorusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Algebraic intersection number `Δ((a,b),(c,d)) = ad − bc`.
pub fn delta(x: TorusClass, y: TorusClass) -> i64 {
    x.a * y.b - x.b * y.a
}

/// Short basis: `X` realizes the systole, `|Δ(X,Y)| = 1`, and
/// `ℓ(Y) ≤ 2·area/(√3·systole)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShortBasis {
    pub x: TorusClass,
    pub y: TorusClass,
    pub x_length: f64,
    pub y_length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlatTorusError {
    /// `det(u, v) = 0` (or too close to it to trust any reduction).
    DegenerateBasis,
    ZeroClass,
    /// `Δ(α, β) = 0`.
    ParallelClasses,
    /// Lagrange reduction did not stabilize; wildly conditioned input.
    ReductionDiverged,
    /// The declared length is below the geodesic length of the class.
    LengthBelowGeodesic { declared: f64, geodesic: f64 },
    /// A 2×n matrix with every 2×2 minor zero is not onto rank 2.
    NotRankTwo,
    /// Matrix entries exceed the declared small-basis bound.
    SmallBasisBoundExceeded { entry: i64, bound: f64 },
}

impl fmt::Display for FlatTorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DegenerateBasis => write!(f, "degenerate lattice basis"),
            Self::ZeroClass => write!(f, "class is zero"),
            Self::ParallelClasses => write!(f, "classes have zero intersection number"),
            Self::ReductionDiverged => write!(f, "lattice reduction did not converge"),
            Self::LengthBelowGeodesic { declared, geodesic } => {
                write!(f, "declared length {declared} below geodesic length {geodesic}")
            }
            Self::NotRankTwo => write!(f, "all 2x2 minors vanish; map is not onto rank 2"),
            Self::SmallBasisBoundExceeded { entry, bound } => {
                write!(f, "matrix entry {entry} exceeds small-basis bound {bound}")
            }
        }
    }
}

impl std::error::Error for FlatTorusError {}

/// Two-sided numeric inequality certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    /// `lhs ≤ rhs` up to an absolute-plus-relative slack.
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol * (1.0 + self.rhs.abs())
    }
}

impl FlatTorus {
    pub fn new(u: [f64; 2], v: [f64; 2]) -> Result<Self, FlatTorusError> {
        let t = Self { u, v };
        let scale = norm(u).max(norm(v));
        if !t.det().is_finite() || t.det().abs() <= 1e-12 * scale * scale {
            return Err(FlatTorusError::DegenerateBasis);
        }
        Ok(t)
    }

    pub fn det(&self) -> f64 {
        self.u[0] * self.v[1] - self.u[1] * self.v[0]
    }

    pub fn area(&self) -> f64 {
        self.det().abs()
    }

    /// The plane vector of a class.
    pub fn vector(&self, c: TorusClass) -> [f64; 2] {
        [
            c.a as f64 * self.u[0] + c.b as f64 * self.v[0],
            c.a as f64 * self.u[1] + c.b as f64 * self.v[1],
        ]
    }

    /// Geodesic length of a class: the norm of its lattice vector.
    pub fn class_length(&self, c: TorusClass) -> f64 {
        norm(self.vector(c))
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Canonical representative of `{c, −c}`: the vector with polar angle in
/// `[0, π)`, i.e. positive second coordinate, or positive first on the axis.
fn canonical_sign(t: &FlatTorus, c: TorusClass) -> TorusClass {
    let v = t.vector(c);
    if v[1] < 0.0 || (v[1] == 0.0 && v[0] < 0.0) {
        TorusClass::new(-c.a, -c.b)
    } else {
        c
    }
}

/// Deterministic pick among same-length candidates: smallest polar angle in
/// `[0, π)`, then lexicographically smallest coefficients.
fn canonical_min(t: &FlatTorus, candidates: &[TorusClass]) -> TorusClass {
    let mut best: Option<(f64, TorusClass)> = None;
    for &c in candidates {
        let c = canonical_sign(t, c);
        let v = t.vector(c);
        let angle = v[1].atan2(v[0]);
        match best {
            None => best = Some((angle, c)),
            Some((ba, bc)) => {
                if angle < ba - 1e-12
                    || (angle <= ba + 1e-12 && (c.a, c.b) < (bc.a, bc.b))
                {
                    best = Some((angle, c));
                }
            }
        }
    }
    best.expect("nonempty candidate list").1
}

/// Lagrange (Gauss) reduction on the coefficient lattice: returns a reduced
/// basis `(w1, w2)` with `|w1| ≤ |w2|` and `|⟨w1,w2⟩| ≤ ½|w1|²`, as integer
/// coefficient pairs in the torus basis.
fn lagrange_reduce(t: &FlatTorus) -> Result<(TorusClass, TorusClass), FlatTorusError> {
    let mut w1 = TorusClass::new(1, 0);
    let mut w2 = TorusClass::new(0, 1);
    for _ in 0..10_000 {
        if t.class_length(w1) > t.class_length(w2) {
            std::mem::swap(&mut w1, &mut w2);
        }
        let v1 = t.vector(w1);
        let v2 = t.vector(w2);
        let mu = (dot(v1, v2) / dot(v1, v1)).round();
        if mu == 0.0 || !mu.is_finite() {
            return Ok((w1, w2));
        }
        let m = mu as i64;
        let next = TorusClass::new(w2.a - m * w1.a, w2.b - m * w1.b);
        // Half-integer ties round to a vector of equal length; stop rather
        // than alternate between the two.
        if t.class_length(next) >= t.class_length(w2) {
            return Ok((w1, w2));
        }
        w2 = next;
    }
    Err(FlatTorusError::ReductionDiverged)
}

/// Length of the shortest closed geodesic: the shortest nonzero lattice
/// vector, by Lagrange-reduced enumeration.
pub fn systole(t: &FlatTorus) -> Result<f64, FlatTorusError> {
    Ok(t.class_length(systole_class(t)?))
}

/// Canonical class realizing the systole.
pub fn systole_class(t: &FlatTorus) -> Result<TorusClass, FlatTorusError> {
    let (w1, w2) = lagrange_reduce(t)?;
    // The reduced w1 attains the minimum; sweep a small coefficient window
    // around it to collect every tie for the deterministic canonical pick.
    let mut min = f64::INFINITY;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if a == 0 && b == 0 {
                continue;
            }
            let c = combine(w1, w2, a, b);
            min = min.min(t.class_length(c));
        }
    }
    let mut ties = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if a == 0 && b == 0 {
                continue;
            }
            let c = combine(w1, w2, a, b);
            if t.class_length(c) <= min * (1.0 + 1e-12) {
                ties.push(c);
            }
        }
    }
    Ok(canonical_min(t, &ties))
}

fn combine(w1: TorusClass, w2: TorusClass, a: i64, b: i64) -> TorusClass {
    TorusClass::new(a * w1.a + b * w2.a, a * w1.b + b * w2.b)
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Short basis per the parallelogram construction: `X` the canonical systole
/// class, `Y` a nearest lattice point on an adjacent `X`-translate line.
pub fn short_basis(t: &FlatTorus) -> Result<ShortBasis, FlatTorusError> {
    let x = systole_class(t)?;
    // Complete x = (p, q) to a unimodular pair via the extended gcd; the
    // systole class is primitive so gcd(p, q) = 1.
    let (g, s, r) = egcd(x.a, x.b);
    debug_assert_eq!(g, 1, "systole class must be primitive");
    // p·yb − q·ya = 1 with (ya, yb) = (−r, s).
    let w0 = TorusClass::new(-r, s);
    debug_assert_eq!(delta(x, w0), 1);

    let vx = t.vector(x);
    let v0 = t.vector(w0);
    let k0 = (-dot(v0, vx) / dot(vx, vx)).round() as i64;
    let mut min = f64::INFINITY;
    let mut candidates = Vec::new();
    for k in k0 - 2..=k0 + 2 {
        let y = TorusClass::new(w0.a + k * x.a, w0.b + k * x.b);
        let len = t.class_length(y);
        if len < min * (1.0 - 1e-12) {
            min = len;
            candidates.clear();
            candidates.push(y);
        } else if len <= min * (1.0 + 1e-12) {
            min = min.min(len);
            candidates.push(y);
        }
    }
    let y = canonical_min(t, &candidates);
    Ok(ShortBasis {
        x,
        y,
        x_length: t.class_length(x),
        y_length: t.class_length(y),
    })
}

/// `ℓ(Y) ≤ 2·area/(√3·systole)` as a certificate.
pub fn short_basis_certificate(t: &FlatTorus, b: &ShortBasis) -> Inequality {
    Inequality {
        lhs: b.y_length,
        rhs: 2.0 * t.area() / (3f64.sqrt() * b.x_length),
    }
}

/// Distance between adjacent lines of `X`-translates: `area/systole`.
/// Always at least `(√3/2)·systole`.
pub fn adjacent_line_spacing(t: &FlatTorus) -> Result<f64, FlatTorusError> {
    Ok(t.area() / systole(t)?)
}

/// Coefficients of `L` in a short basis, with the coefficient bound
/// `max(|a|,|b|) ≤ 2·length(L)/(√3·systole)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassCoefficients {
    pub a: i64,
    pub b: i64,
    pub bound: Inequality,
}

/// Express `[L] = a[X] + b[Y]` and certify the coefficient bound. The
/// declared `l_length` must be at least the geodesic length of `L`; the
/// bound is checked against the declared value.
pub fn class_coefficients(
    t: &FlatTorus,
    basis: &ShortBasis,
    l_length: f64,
    l: TorusClass,
) -> Result<ClassCoefficients, FlatTorusError> {
    if l.is_zero() {
        return Err(FlatTorusError::ZeroClass);
    }
    let geodesic = t.class_length(l);
    if l_length < geodesic * (1.0 - 1e-9) {
        return Err(FlatTorusError::LengthBelowGeodesic { declared: l_length, geodesic });
    }
    let d = delta(basis.x, basis.y);
    debug_assert_eq!(d.abs(), 1);
    let a = delta(l, basis.y) * d;
    let b = delta(basis.x, l) * d;
    debug_assert_eq!(a * basis.x.a + b * basis.y.a, l.a);
    debug_assert_eq!(a * basis.x.b + b * basis.y.b, l.b);
    let bound = Inequality {
        lhs: a.abs().max(b.abs()) as f64,
        rhs: 2.0 * l_length / (3f64.sqrt() * basis.x_length),
    };
    Ok(ClassCoefficients { a, b, bound })
}

/// The intersection inequality for closed geodesics `A, B, μ` with
/// `Δ(A,B) ≠ 0`:
/// `½·ℓ(μ)/(ℓ(A)+ℓ(B)) ≤ max(|Δ(μ,A)|, |Δ(μ,B)|)`.
pub fn intersection_inequality(
    t: &FlatTorus,
    a: TorusClass,
    b: TorusClass,
    mu: TorusClass,
) -> Result<Inequality, FlatTorusError> {
    if delta(a, b) == 0 {
        return Err(FlatTorusError::ParallelClasses);
    }
    let lhs = 0.5 * t.class_length(mu) / (t.class_length(a) + t.class_length(b));
    let rhs = delta(mu, a).abs().max(delta(mu, b).abs()) as f64;
    Ok(Inequality { lhs, rhs })
}

/// Covering index certificate: the index `n = |Δ(α,β)|` of the subgroup the
/// two classes generate in the core `ℤ`, with `n ≤ 8R²/(3ε²)` whenever
/// `ℓ(α)+ℓ(β) < R` on a torus of injectivity scale `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringIndex {
    pub index: u64,
    pub bound: Inequality,
}

/// Index of the cover that makes `⟨[α̃],[β̃]⟩` surject onto the solid-torus
/// fundamental group. Coefficients are taken in short-basis coordinates; the
/// determinant is basis-invariant up to sign, so any unimodular coordinates
/// give the same index.
pub fn covering_index(
    alpha: TorusClass,
    beta: TorusClass,
    bound_r: f64,
    sys: f64,
) -> Result<CoveringIndex, FlatTorusError> {
    let d = delta(alpha, beta);
    if d == 0 {
        return Err(FlatTorusError::ParallelClasses);
    }
    let n = d.unsigned_abs();
    let bound = Inequality {
        lhs: n as f64,
        rhs: 8.0 * bound_r * bound_r / (3.0 * sys * sys),
    };
    Ok(CoveringIndex { index: n, bound })
}

/// Kernel vectors for a rank-2 epimorphism `g: ℤⁿ → ℤ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    /// Pivot column pair with a nonzero minor.
    pub pivot: (usize, usize),
    /// `n − 2` integer kernel vectors; vector for column `i` is supported on
    /// `{pivot.0, pivot.1, i}`.
    pub vectors: Vec<Vec<i64>>,
    /// Exact maximum coefficient magnitude across the vectors.
    pub max_coefficient: i64,
    /// `max_coefficient ≤ 2·max|a_ij|²`, exact on the integer side.
    pub bound: Inequality,
}

/// Kernel basis from 2×2 cross products of column triples. Rows of `g` are
/// the two coordinates of the map; columns index the generators.
pub fn kernel_basis(g: &[Vec<i64>; 2], smallbasis_bound: f64) -> Result<KernelBasis, FlatTorusError> {
    let n = g[0].len();
    assert_eq!(g[1].len(), n, "rows must have equal length");
    for row in g {
        for &e in row {
            if (e.abs() as f64) > smallbasis_bound {
                return Err(FlatTorusError::SmallBasisBoundExceeded {
                    entry: e,
                    bound: smallbasis_bound,
                });
            }
        }
    }
    let minor = |p: usize, q: usize| -> i64 { g[0][p] * g[1][q] - g[0][q] * g[1][p] };
    let mut pivot = None;
    'outer: for p in 0..n {
        for q in p + 1..n {
            if minor(p, q) != 0 {
                pivot = Some((p, q));
                break 'outer;
            }
        }
    }
    let Some((p, q)) = pivot else {
        return Err(FlatTorusError::NotRankTwo);
    };

    let mut vectors = Vec::with_capacity(n.saturating_sub(2));
    let mut max_c: i64 = 0;
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        // Cross product of (g0p, g0q, g0i) and (g1p, g1q, g1i), placed at
        // coordinates (p, q, i).
        let c1 = g[0][q] * g[1][i] - g[0][i] * g[1][q];
        let c2 = g[0][i] * g[1][p] - g[0][p] * g[1][i];
        let c3 = minor(p, q);
        let mut s = vec![0i64; n];
        s[p] = c1;
        s[q] = c2;
        s[i] = c3;
        debug_assert_eq!(g[0].iter().zip(&s).map(|(a, b)| a * b).sum::<i64>(), 0);
        debug_assert_eq!(g[1].iter().zip(&s).map(|(a, b)| a * b).sum::<i64>(), 0);
        max_c = max_c.max(c1.abs()).max(c2.abs()).max(c3.abs());
        vectors.push(s);
    }
    let max_entry = g.iter().flatten().map(|e| e.abs()).max().unwrap_or(0);
    Ok(KernelBasis {
        pivot: (p, q),
        vectors,
        max_coefficient: max_c,
        bound: Inequality {
            lhs: max_c as f64,
            rhs: 2.0 * (max_entry * max_entry) as f64,
        },
    })
}

/// Seeded random torus with basis condition number at most `max_cond`.
pub fn random_torus(rng: &mut crate::rng::SplitMix64, max_cond: f64) -> FlatTorus {
    loop {
        let scale = rng.range_f64(0.2, 2.0);
        let ratio = rng.range_f64(1.0, 12.0);
        let phi = rng.range_f64(0.0, std::f64::consts::PI);
        let theta = rng.range_f64(0.35, std::f64::consts::PI - 0.35);
        let u = [scale * phi.cos(), scale * phi.sin()];
        let w = [
            scale * ratio * (phi + theta).cos(),
            scale * ratio * (phi + theta).sin(),
        ];
        // Scramble with a few unimodular shears so the given basis is not
        // already reduced.
        let mut basis = (u, w);
        for _ in 0..3 {
            let k = rng.range_i64(-2, 2) as f64;
            if rng.chance(0.5) {
                basis.1 = [basis.1[0] + k * basis.0[0], basis.1[1] + k * basis.0[1]];
            } else {
                basis.0 = [basis.0[0] + k * basis.1[0], basis.0[1] + k * basis.1[1]];
            }
        }
        let Ok(t) = FlatTorus::new(basis.0, basis.1) else {
            continue;
        };
        if condition_number(&t) <= max_cond {
            return t;
        }
    }
}

/// Spectral condition number of the basis matrix.
pub fn condition_number(t: &FlatTorus) -> f64 {
    let m = [t.u[0], t.v[0], t.u[1], t.v[1]];
    let trace = m.iter().map(|e| e * e).sum::<f64>();
    let det = (m[0] * m[3] - m[1] * m[2]).abs();
    let disc = (trace * trace - 4.0 * det * det).max(0.0).sqrt();
    let l_max = 0.5 * (trace + disc);
    let l_min = 0.5 * (trace - disc);
    (l_max / l_min.max(f64::MIN_POSITIVE)).sqrt()
}
