//! Rolling-frame curves: circles and iterated involutes (taut-string curves).
//!
//! Every curve produced by unwinding a string from a chain of corners, circle
//! arcs and earlier involutes has the form
//!
//! ```text
//! x(φ) = origin + a(φ - φ0)·e(φ) + b(φ - φ0)·e⊥(φ),   e(φ) = (cos φ, sin φ)
//! ```
//!
//! with polynomial coefficients `a`, `b`. The derivative is
//! `(a' - b)·e + (a + b')·e⊥`, and for these curves one of the two components
//! vanishes identically, so the tangent is always `±e` or `±e⊥` and arc length
//! is the integral of a polynomial. Points, tangents and lengths are therefore
//! evaluated in closed form at every nesting level.

use serde::{Deserialize, Serialize};

use crate::geom::Point;

/// Dense polynomial, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn zero() -> Self {
        Poly(vec![0.0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn deriv(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Poly {
        let mut c = vec![0.0];
        c.extend(self.0.iter().enumerate().map(|(k, &v)| v / (k + 1) as f64));
        Poly(c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(0.0) + o.0.get(k).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * k).collect())
    }

    /// Re-expands `p(t)` as a polynomial in `s = t - shift`.
    pub fn shifted(&self, shift: f64) -> Poly {
        // p(s + shift) by repeated synthetic division
        let mut c = self.0.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] += shift * c[j + 1];
            }
        }
        Poly(c)
    }

    pub fn magnitude(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// Which frame axis the curve's derivative lies along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Radial,
    Normal,
}

/// `x(φ) = origin + a(φ-φ0)·e(φ) + b(φ-φ0)·e⊥(φ)`; see the module docs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollingCurve {
    pub origin: Point,
    pub phi0: f64,
    pub a: Poly,
    pub b: Poly,
    /// 0 for circles, k for the k-th iterated involute.
    pub level: u8,
}

impl RollingCurve {
    /// Circle about `center`, parametrized by polar angle.
    pub fn circle(center: Point, radius: f64) -> Self {
        RollingCurve {
            origin: center,
            phi0: 0.0,
            a: Poly::constant(radius),
            b: Poly::zero(),
            level: 0,
        }
    }

    pub fn point(&self, phi: f64) -> Point {
        let t = phi - self.phi0;
        let e = Point::polar(phi);
        self.origin + e * self.a.eval(t) + e.perp() * self.b.eval(t)
    }

    fn components(&self) -> (Poly, Poly) {
        (
            self.a.deriv().add(&self.b.scale(-1.0)),
            self.a.add(&self.b.deriv()),
        )
    }

    /// Axis carrying the derivative and the signed speed polynomial along it.
    pub fn speed(&self) -> (Axis, Poly) {
        let (radial, normal) = self.components();
        if radial.magnitude() >= normal.magnitude() {
            (Axis::Radial, radial)
        } else {
            (Axis::Normal, normal)
        }
    }

    pub fn axis_vector(axis: Axis, phi: f64) -> Point {
        match axis {
            Axis::Radial => Point::polar(phi),
            Axis::Normal => Point::polar(phi).perp(),
        }
    }

    pub fn derivative(&self, phi: f64) -> Point {
        let t = phi - self.phi0;
        let (radial, normal) = self.components();
        let e = Point::polar(phi);
        e * radial.eval(t) + e.perp() * normal.eval(t)
    }

    /// Unit tangent in the direction of increasing `phi`.
    pub fn tangent(&self, phi: f64) -> Point {
        let (axis, q) = self.speed();
        let s = q.eval(phi - self.phi0);
        let v = Self::axis_vector(axis, phi);
        if s >= 0.0 {
            v
        } else {
            -v
        }
    }

    /// Signed integral of the speed polynomial from `p0` to `p1`; its absolute
    /// value is the arc length when the speed keeps its sign.
    pub fn signed_length(&self, p0: f64, p1: f64) -> f64 {
        let (_, q) = self.speed();
        let qi = q.integral();
        qi.eval(p1 - self.phi0) - qi.eval(p0 - self.phi0)
    }

    pub fn length(&self, p0: f64, p1: f64) -> f64 {
        self.signed_length(p0, p1).abs()
    }

    /// Taut-string curve of this curve. The base tangent used is
    /// `sign · axis_vector(φ)`, which must point away from the string's fixed
    /// end; `tau_ref` is the base arc length from that end at `phi_ref`.
    pub fn involute(&self, sign: f64, phi_ref: f64, tau_ref: f64, string: f64) -> RollingCurve {
        let (axis, q) = self.speed();
        // tau(t) = tau_ref + sign * (Q(t) - Q(t_ref)),  derivative·T = q·sign
        let qi = q.integral();
        let t_ref = phi_ref - self.phi0;
        let tau = qi
            .scale(sign)
            .add(&Poly::constant(tau_ref - sign * qi.eval(t_ref)));
        // X = base + (K - tau)·sign·axis
        let arm = Poly::constant(string).add(&tau.scale(-1.0)).scale(sign);
        let (a, b) = match axis {
            Axis::Radial => (self.a.add(&arm), self.b.clone()),
            Axis::Normal => (self.a.clone(), self.b.add(&arm)),
        };
        RollingCurve {
            origin: self.origin,
            phi0: self.phi0,
            a,
            b,
            level: self.level + 1,
        }
    }

    /// Rebases the polynomial expansion point to `phi0` for conditioning.
    pub fn rebased(&self, phi0: f64) -> RollingCurve {
        let shift = phi0 - self.phi0;
        RollingCurve {
            origin: self.origin,
            phi0,
            a: self.a.shifted(shift),
            b: self.b.shifted(shift),
            level: self.level,
        }
    }

    /// Parameters subdividing `[p0, p1]` so that consecutive samples have
    /// chordal deviation at most `tol` and tangent change below 0.2 rad.
    pub fn adaptive_params(&self, p0: f64, p1: f64, tol: f64) -> Vec<f64> {
        let mut out = vec![p0];
        let mut stack = vec![(p0, p1, 0u32)];
        // depth-first, right half pushed first so output stays ordered
        while let Some((a, b, depth)) = stack.pop() {
            if depth < 40 && !self.chord_ok(a, b, tol) {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            } else {
                out.push(b);
            }
        }
        out
    }

    fn chord_ok(&self, a: f64, b: f64, tol: f64) -> bool {
        let pa = self.point(a);
        let pb = self.point(b);
        let ta = self.tangent(a);
        let tb = self.tangent(b);
        if ta.dot(tb) < (0.2f64).cos() {
            return false;
        }
        // deviation at interior quarter points
        [0.25, 0.5, 0.75].iter().all(|&f| {
            let q = self.point(a + (b - a) * f);
            crate::geom::dist_point_segment(q, pa, pb) <= tol
        })
    }
}
