//! JSON configuration: curve, named functions, function mode, bounds, seed.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::{fixtures, CurvePoint, EllipticCurve};
use crate::cycle::{check_admissible, FunctionMode};
use crate::divisor::FunctionSpec;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Field, FieldScalar};
use crate::{FormalDivisor, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCurve {
    pub a1: Value,
    pub a2: Value,
    pub a3: Value,
    pub a4: Value,
    pub a6: Value,
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub point: Value,
    pub coeff: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunction {
    pub name: String,
    pub divisor: Vec<RawTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Fbar,
    Fn,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    /// Largest number of functions `g_i` in the cycle families.
    pub n_max: usize,
    /// Largest number of fixed points `a_1..a_r`.
    pub r_max: usize,
    /// Largest tableau size for the projector checks.
    pub b_max: usize,
    /// Largest symmetric power in the label checks.
    pub label_max: u32,
    /// Random generic tuples per coordinate in the fiber checks.
    pub fiber_trials: usize,
    /// Prime of the finite field used for the fiber checks.
    pub fiber_prime: u64,
    /// Largest `n` for which the bar chain is built.
    pub chain_n_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n_max: 3, r_max: 2, b_max: 5, label_max: 8, fiber_trials: 20, fiber_prime: 101, chain_n_max: 2 }
    }
}

/// The file format. `points` optionally fixes the points `a_1..a_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub curve: RawCurve,
    pub functions: Vec<RawFunction>,
    #[serde(default = "default_mode")]
    pub mode: ModeName,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Value>>,
}

fn default_mode() -> ModeName {
    ModeName::Fbar
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub curve: EllipticCurve,
    pub functions: Vec<FunctionSpec>,
    pub mode: FunctionMode,
    pub bounds: Bounds,
    pub seed: u64,
    pub points: Vec<CurvePoint>,
    pub raw: RawConfig,
}

fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

fn scalar(field: Field, v: &Value, at: &str) -> Result<FieldScalar> {
    let q = match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Q::from_integer(i.into()),
            None => return input(format!("{at}: {n} is not an integer")),
        },
        Value::String(s) => parse_rational(s).map_err(|e| Error::Input(format!("{at}: {e}")))?,
        other => return input(format!("{at}: expected an integer or a rational string, got {other}")),
    };
    field.from_rational(&q).map_err(|e| Error::Input(format!("{at}: {e}")))
}

fn coefficient(v: &Value, at: &str) -> Result<Q> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Q::from_integer(i.into())),
            None => input(format!("{at}: {n} is not an integer")),
        },
        Value::String(s) => parse_rational(s).map_err(|e| Error::Input(format!("{at}: {e}"))),
        other => input(format!("{at}: expected an integer or a rational string, got {other}")),
    }
}

/// `[x, y]` or `"inf"`, checked against the curve equation.
pub fn parse_point(curve: &EllipticCurve, v: &Value, at: &str) -> Result<CurvePoint> {
    match v {
        Value::String(s) if s == "inf" => Ok(CurvePoint::Infinity),
        Value::Array(xy) if xy.len() == 2 => {
            let x = scalar(curve.field(), &xy[0], at)?;
            let y = scalar(curve.field(), &xy[1], at)?;
            let p = CurvePoint::affine(x, y);
            if !curve.contains(&p) {
                return input(format!("{at}: point {p} does not lie on the curve {curve}"));
            }
            Ok(p)
        }
        other => input(format!("{at}: expected [x, y] or \"inf\", got {other}")),
    }
}

/// Serializes a point in the config format.
pub fn point_value(p: &CurvePoint) -> Value {
    match p {
        CurvePoint::Infinity => Value::String("inf".into()),
        CurvePoint::Affine { x, y } => Value::Array(vec![scalar_value(x), scalar_value(y)]),
    }
}

fn scalar_value(s: &FieldScalar) -> Value {
    let text = s.to_exact_string();
    match text.parse::<i64>() {
        Ok(i) => Value::from(i),
        Err(_) => Value::String(text),
    }
}

impl RawConfig {
    pub fn validate(self) -> Result<Config> {
        let field = Field::parse(&self.curve.field).map_err(|e| Error::Input(format!("curve.field: {e}")))?;
        let c = &self.curve;
        let coeffs = [("a1", &c.a1), ("a2", &c.a2), ("a3", &c.a3), ("a4", &c.a4), ("a6", &c.a6)]
            .into_iter()
            .map(|(k, v)| scalar(field, v, &format!("curve.{k}")))
            .collect::<Result<Vec<_>>>()?;
        let [a1, a2, a3, a4, a6]: [FieldScalar; 5] = coeffs.try_into().expect("five coefficients");
        let curve = EllipticCurve::from_scalars(field, a1, a2, a3, a4, a6)
            .map_err(|e| Error::Input(format!("curve: {e}")))?;
        let mut functions = Vec::new();
        for (i, f) in self.functions.iter().enumerate() {
            let mut d = FormalDivisor::new();
            for (k, t) in f.divisor.iter().enumerate() {
                let at = format!("functions[{i}] ({}).divisor[{k}]", f.name);
                let p = parse_point(&curve, &t.point, &format!("{at}.point"))?;
                d.add(p, coefficient(&t.coeff, &format!("{at}.coeff"))?);
            }
            let spec = FunctionSpec::user(&curve, &f.name, d)
                .map_err(|e| Error::Input(format!("functions[{i}]: {e}")))?;
            functions.push(spec);
        }
        let mode = match self.mode {
            ModeName::Fbar => FunctionMode::Fbar,
            ModeName::Fn => {
                let t = curve.full_two_torsion().map_err(|e| Error::Input(format!("mode: {e}")))?;
                if t.len() < 3 {
                    return input(format!("mode fn needs three rational points of order two on {curve}"));
                }
                FunctionMode::Fn { u: t[0].clone(), v: t[1].clone() }
            }
        };
        let b = &self.bounds;
        if b.fiber_trials == 0 || b.b_max == 0 {
            return input("bounds: fiber_trials and b_max must be positive");
        }
        Field::prime(b.fiber_prime).map_err(|e| Error::Input(format!("bounds.fiber_prime: {e}")))?;
        let points = match &self.points {
            Some(vs) => vs
                .iter()
                .enumerate()
                .map(|(i, v)| parse_point(&curve, v, &format!("points[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            None => default_points(&curve, &functions, b.r_max)?,
        };
        if points.len() < b.r_max {
            return input(format!("bounds.r_max = {} but only {} points are given", b.r_max, points.len()));
        }
        let report = check_admissible(&curve, &functions, &mode).map_err(|e| Error::Input(format!("functions: {e}")))?;
        if !report.violations.is_empty() {
            return input(format!("functions are not admissible: {:?}", report.violations));
        }
        Ok(Config { curve, functions, mode, bounds: self.bounds.clone(), seed: self.seed, points, raw: self })
    }
}

/// Multiples `k s`, `k = 11, 13, ..`, of the first support point `s`, skipping
/// the supports of the functions, their negatives and previously chosen points.
fn default_points(curve: &EllipticCurve, functions: &[FunctionSpec], r: usize) -> Result<Vec<CurvePoint>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut taken = std::collections::BTreeSet::new();
    let mut base = None;
    for f in functions {
        for p in f.divisor(curve)?.support() {
            base.get_or_insert_with(|| p.clone());
            taken.insert(curve.neg(&p));
            taken.insert(p);
        }
    }
    let Some(s) = base.filter(|s| !s.is_infinity()) else {
        return input("points: no support point to derive fixed points from; give \"points\" explicitly");
    };
    let mut out = Vec::new();
    let mut k = 11;
    while out.len() < r && k < 200 {
        let p = curve.scalar_mul(k, &s)?;
        k += 2;
        if p.is_infinity() || taken.contains(&p) {
            continue;
        }
        taken.insert(curve.neg(&p));
        taken.insert(p.clone());
        out.push(p);
    }
    if out.len() < r {
        return input("points: could not derive fixed points; give \"points\" explicitly");
    }
    Ok(out)
}

pub fn parse_raw_config(text: &str) -> Result<RawConfig> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("config: {e}")))
}

pub fn parse_config(text: &str) -> Result<Config> {
    parse_raw_config(text)?.validate()
}

/// Reads a configuration file without validating it.
pub fn read_raw_config(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_raw_config(&text)
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<Config> {
    read_raw_config(path)?.validate()
}

/// The rank-one fixture: `y^2 + y = x^3 - x` over `Q` with three functions
/// supported on multiples of `P = (0,0)`.
pub fn fixture_config() -> RawConfig {
    let e = fixtures::curve_37a1();
    let p = fixtures::generator_37a1();
    let m = |k: i64| point_value(&e.scalar_mul(k, &p).expect("on curve"));
    let function = |name: &str, terms: [(i64, i64); 4]| RawFunction {
        name: name.into(),
        divisor: terms.iter().map(|&(k, c)| RawTerm { point: m(k), coeff: Value::from(c) }).collect(),
    };
    RawConfig {
        curve: RawCurve {
            a1: 0.into(),
            a2: 0.into(),
            a3: 1.into(),
            a4: (-1).into(),
            a6: 0.into(),
            field: "rational".into(),
        },
        functions: vec![
            function("g1", [(1, 1), (2, 1), (-1, -1), (4, -1)]),
            function("g2", [(3, 1), (-4, 1), (5, -1), (-6, -1)]),
            function("g3", [(7, 1), (-8, 1), (9, -1), (-10, -1)]),
        ],
        mode: ModeName::Fbar,
        bounds: Bounds::default(),
        seed: 0,
        points: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_validates() {
        let cfg = fixture_config().validate().unwrap();
        assert_eq!(cfg.functions.len(), 3);
        assert_eq!(cfg.points.len(), 2);
        let e = &cfg.curve;
        // the first support point in order is (0,-1) = -P
        let p = fixtures::generator_37a1();
        assert_eq!(cfg.points[0], e.scalar_mul(-11, &p).unwrap());
        assert_eq!(cfg.points[1], e.scalar_mul(-13, &p).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let raw = fixture_config();
        let text = serde_json::to_string(&raw).unwrap();
        let back: RawConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, raw);
    }

    #[test]
    fn off_curve_point_named() {
        let mut raw = fixture_config();
        raw.functions[0].divisor[0].point = serde_json::json!([1, 1]);
        let err = raw.validate().unwrap_err().to_string();
        assert!(err.contains("(1,1)"), "{err}");
        assert!(err.contains("functions[0]"), "{err}");
    }

    #[test]
    fn non_principal_cites_abel() {
        let mut raw = fixture_config();
        raw.functions[0].divisor.pop();
        raw.functions[0].divisor.push(RawTerm { point: serde_json::json!([0, -1]), coeff: "-1".into() });
        let err = raw.validate().unwrap_err().to_string();
        assert!(err.contains("not principal") && err.contains("Abel"), "{err}");
    }

    #[test]
    fn rational_coefficient_strings() {
        let e = fixtures::curve_37a1();
        let p = parse_point(&e, &serde_json::json!(["0", "-1"]), "p").unwrap();
        assert_eq!(p, e.neg(&fixtures::generator_37a1()));
        assert_eq!(coefficient(&"3/6".into(), "c").unwrap(), Q::new(1.into(), 2.into()));
        assert!(coefficient(&serde_json::json!(1.5), "c").is_err());
        assert!(parse_point(&e, &"zero".into(), "p").is_err());
    }

    #[test]
    fn fn_mode_needs_two_torsion() {
        let mut raw = fixture_config();
        raw.mode = ModeName::Fn;
        assert!(matches!(raw.validate(), Err(Error::Input(_))));
    }
}
