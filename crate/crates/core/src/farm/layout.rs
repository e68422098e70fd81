use std::fmt::Write as _;

use thiserror::Error;

/// Farm area allotted to each buoy (m²).
pub const AREA_PER_BUOY: f64 = 20_000.0;
/// Minimum inter-buoy distance for maintenance access (m).
pub const SAFETY_DISTANCE: f64 = 50.0;
pub const SPRING_BOUNDS: (f64, f64) = (1.0, 5.5e5);
pub const DAMPER_BOUNDS: (f64, f64) = (5e4, 4e5);
/// Manufacturer default PTO setting for the predominant wave frequency.
pub const DEFAULT_PTO: Pto = Pto {
    k: 407_510.0,
    d: 97_412.0,
};

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("non-finite value in layout: {0}")]
    NonFinite(String),
    #[error("positions and PTO lists differ in length ({0} vs {1})")]
    Length(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Power take-off spring stiffness `k` (N/m) and damping `d` (N·s/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pto {
    pub k: f64,
    pub d: f64,
}

impl Pto {
    pub fn new(k: f64, d: f64) -> Self {
        Self { k, d }
    }
}

/// Search-space limits for an `n`-buoy farm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarmBounds {
    pub n: usize,
    /// Side of the square farm, `[0, size]²`.
    pub size: f64,
    pub safety: f64,
    pub spring: (f64, f64),
    pub damper: (f64, f64),
}

impl FarmBounds {
    pub fn for_buoys(n: usize) -> Self {
        Self {
            n,
            size: (n as f64 * AREA_PER_BUOY).sqrt(),
            safety: SAFETY_DISTANCE,
            spring: SPRING_BOUNDS,
            damper: DAMPER_BOUNDS,
        }
    }

    /// Number of decision variables (x, y, k, d per buoy).
    pub fn dims(&self) -> usize {
        4 * self.n
    }

    pub fn contains(&self, p: &Position) -> bool {
        (0.0..=self.size).contains(&p.x) && (0.0..=self.size).contains(&p.y)
    }

    /// Euclidean distance from `p` to the farm square, zero inside.
    pub fn shortfall(&self, p: &Position) -> f64 {
        let dx = p.x - p.x.clamp(0.0, self.size);
        let dy = p.y - p.y.clamp(0.0, self.size);
        (dx * dx + dy * dy).sqrt()
    }

    /// Lower and upper bound of decision coordinate `i` in the flat
    /// `[x1, y1, …, xn, yn, k1, d1, …, kn, dn]` ordering.
    pub fn coordinate_range(&self, i: usize, n: usize) -> (f64, f64) {
        if i < 2 * n {
            (0.0, self.size)
        } else if (i - 2 * n).is_multiple_of(2) {
            self.spring
        } else {
            self.damper
        }
    }
}

/// Nearest in-bounds PTO setting.
pub fn clamp_pto(pto: Pto, bounds: &FarmBounds) -> Pto {
    Pto {
        k: pto.k.clamp(bounds.spring.0, bounds.spring.1),
        d: pto.d.clamp(bounds.damper.0, bounds.damper.1),
    }
}

/// Buoy positions plus per-buoy PTO settings.
///
/// PTO values are always inside the bounds they were constructed with;
/// positions are only required to be finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FarmLayout {
    positions: Vec<Position>,
    ptos: Vec<Pto>,
}

impl FarmLayout {
    pub fn new(
        positions: Vec<Position>,
        ptos: Vec<Pto>,
        bounds: &FarmBounds,
    ) -> Result<Self, LayoutError> {
        if positions.len() != ptos.len() {
            return Err(LayoutError::Length(positions.len(), ptos.len()));
        }
        for p in &positions {
            check_finite(p.x, p.y)?;
        }
        for t in &ptos {
            check_finite(t.k, t.d)?;
        }
        let ptos = ptos.into_iter().map(|t| clamp_pto(t, bounds)).collect();
        Ok(Self { positions, ptos })
    }

    pub fn empty() -> Self {
        Self {
            positions: Vec::new(),
            ptos: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn ptos(&self) -> &[Pto] {
        &self.ptos
    }

    pub fn position(&self, i: usize) -> Position {
        self.positions[i]
    }

    pub fn pto(&self, i: usize) -> Pto {
        self.ptos[i]
    }

    pub fn set_position(&mut self, i: usize, p: Position) -> Result<(), LayoutError> {
        check_finite(p.x, p.y)?;
        self.positions[i] = p;
        Ok(())
    }

    pub fn set_pto(&mut self, i: usize, pto: Pto, bounds: &FarmBounds) -> Result<(), LayoutError> {
        check_finite(pto.k, pto.d)?;
        self.ptos[i] = clamp_pto(pto, bounds);
        Ok(())
    }

    pub fn push(&mut self, p: Position, pto: Pto, bounds: &FarmBounds) -> Result<(), LayoutError> {
        check_finite(p.x, p.y)?;
        check_finite(pto.k, pto.d)?;
        self.positions.push(p);
        self.ptos.push(clamp_pto(pto, bounds));
        Ok(())
    }

    /// Layout holding only buoy `i`.
    pub fn single(&self, i: usize) -> FarmLayout {
        FarmLayout {
            positions: vec![self.positions[i]],
            ptos: vec![self.ptos[i]],
        }
    }

    /// Same layout with every buoy shifted by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> FarmLayout {
        FarmLayout {
            positions: self
                .positions
                .iter()
                .map(|p| Position::new(p.x + dx, p.y + dy))
                .collect(),
            ptos: self.ptos.clone(),
        }
    }

    /// Buoys reordered so that new index `i` holds old buoy `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> FarmLayout {
        FarmLayout {
            positions: order.iter().map(|&i| self.positions[i]).collect(),
            ptos: order.iter().map(|&i| self.ptos[i]).collect(),
        }
    }

    /// Same positions, every PTO replaced by `pto` (clamped).
    pub fn with_uniform_pto(&self, pto: Pto, bounds: &FarmBounds) -> FarmLayout {
        FarmLayout {
            positions: self.positions.clone(),
            ptos: vec![clamp_pto(pto, bounds); self.len()],
        }
    }

    /// Text record: header `layout n=<n> scenario=<name>`, then `x y k d`
    /// per buoy in shortest round-trip decimal form.
    pub fn to_text(&self, scenario: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "layout n={} scenario={}", self.len(), scenario);
        for (p, t) in self.positions.iter().zip(&self.ptos) {
            let _ = writeln!(out, "{} {} {} {}", p.x, p.y, t.k, t.d);
        }
        out
    }

    /// Parses the layout text record, returning the layout and the scenario
    /// name from its header. PTO values are clamped into the default bounds.
    pub fn parse(text: &str) -> Result<(FarmLayout, String), LayoutError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(LayoutError::Parse {
            line: 0,
            message: "empty layout file".into(),
        })?;
        let perr = |line: usize, message: String| LayoutError::Parse { line, message };
        let mut parts = header.split_whitespace();
        if parts.next() != Some("layout") {
            return Err(perr(hline, "expected `layout n=<n> scenario=<name>`".into()));
        }
        let mut n = None;
        let mut scenario = String::new();
        for p in parts {
            match p.split_once('=') {
                Some(("n", v)) => {
                    n = Some(
                        v.parse::<usize>()
                            .map_err(|_| perr(hline, format!("bad buoy count `{v}`")))?,
                    )
                }
                Some(("scenario", v)) => scenario = v.to_string(),
                _ => return Err(perr(hline, format!("unexpected header token `{p}`"))),
            }
        }
        let n = n.ok_or_else(|| perr(hline, "missing n=<count>".into()))?;
        let mut positions = Vec::with_capacity(n);
        let mut ptos = Vec::with_capacity(n);
        for (line, l) in lines {
            let v: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| perr(line, format!("bad number `{t}`"))))
                .collect::<Result<_, _>>()?;
            if v.len() != 4 {
                return Err(perr(line, format!("expected `x y k d`, found {} values", v.len())));
            }
            positions.push(Position::new(v[0], v[1]));
            ptos.push(Pto::new(v[2], v[3]));
        }
        if positions.len() != n {
            return Err(perr(
                0,
                format!("header says n={n} but {} buoys follow", positions.len()),
            ));
        }
        let layout = FarmLayout::new(positions, ptos, &FarmBounds::for_buoys(n))?;
        Ok((layout, scenario))
    }
}

fn check_finite(a: f64, b: f64) -> Result<(), LayoutError> {
    if a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(LayoutError::NonFinite(format!("({a}, {b})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn farm_side_follows_area_per_buoy() {
        assert!((FarmBounds::for_buoys(4).size - 282.842_712_474_619).abs() < 1e-9);
        assert!((FarmBounds::for_buoys(16).size - 565.685_424_949_238).abs() < 1e-9);
    }

    #[test]
    fn clamp_examples() {
        let b = FarmBounds::for_buoys(4);
        assert_eq!(clamp_pto(Pto::new(6e5, 1e5), &b), Pto::new(5.5e5, 1e5));
        assert_eq!(clamp_pto(Pto::new(2e5, 2e5), &b), Pto::new(2e5, 2e5));
        assert_eq!(clamp_pto(Pto::new(-5.0, 1e4), &b), Pto::new(1.0, 5e4));
    }

    #[test]
    fn construction_clamps_and_rejects_nan() {
        let b = FarmBounds::for_buoys(1);
        let l = FarmLayout::new(vec![Position::new(1.0, 2.0)], vec![Pto::new(1e9, 0.0)], &b).unwrap();
        assert_eq!(l.pto(0), Pto::new(5.5e5, 5e4));
        assert!(FarmLayout::new(vec![Position::new(f64::NAN, 0.0)], vec![DEFAULT_PTO], &b).is_err());
        assert!(FarmLayout::new(vec![Position::new(0.0, 0.0)], vec![Pto::new(1.0, f64::INFINITY)], &b).is_err());
    }

    #[test]
    fn shortfall_is_distance_to_square() {
        let b = FarmBounds::for_buoys(4);
        assert_eq!(b.shortfall(&Position::new(10.0, 10.0)), 0.0);
        assert_eq!(b.shortfall(&Position::new(-3.0, 10.0)), 3.0);
        assert!((b.shortfall(&Position::new(-3.0, -4.0)) - 5.0).abs() < 1e-12);
        assert!((b.shortfall(&Position::new(b.size + 1.0, 5.0)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_layout_text() {
        assert!(FarmLayout::parse("").is_err());
        assert!(FarmLayout::parse("layout n=2 scenario=x\n1 2 3 4\n").is_err());
        assert!(FarmLayout::parse("layout n=1 scenario=x\n1 2 3\n").is_err());
        assert!(FarmLayout::parse("layout n=1 scenario=x\n1 2 3 q\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(pts in proptest::collection::vec((-50.0f64..600.0, -50.0f64..600.0, 1.0f64..5.5e5, 5e4f64..4e5), 1..17)) {
            let b = FarmBounds::for_buoys(pts.len());
            let layout = FarmLayout::new(
                pts.iter().map(|p| Position::new(p.0, p.1)).collect(),
                pts.iter().map(|p| Pto::new(p.2, p.3)).collect(),
                &b,
            ).unwrap();
            let (back, name) = FarmLayout::parse(&layout.to_text("perth_like")).unwrap();
            prop_assert_eq!(back, layout);
            prop_assert_eq!(name, "perth_like");
        }
    }
}
