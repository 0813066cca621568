//! JSON set files and the canonical number format shared by set files and
//! reports.

use std::io;
use std::path::Path;

use polydiff::{
    BallSet, BoxSet, ConvexSet, HPolyhedron, LiftedDifference, ToleranceConfig, VPolytope,
};
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::Formatter;

use crate::error::{CliError, CliResult};

/// One set per file, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SetDescriptor {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Vrep {
        vertices: Vec<Vec<f64>>,
    },
    Hrep {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        /// Present on a lifted half-space difference.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        blocks: Option<Blocks>,
    },
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Orthant {
        dim: usize,
    },
}

/// Layout of a lifted system over `(x | y)`: `rows[0]` rows of `[A1 | A1]`
/// then `rows[1]` rows of `[0 | A2]`, with `n` the dimension of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, SerializeDerive, Deserialize)]
pub struct Blocks {
    pub n: usize,
    pub rows: [usize; 2],
}

/// A parsed and validated set.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    V(VPolytope),
    H(HPolyhedron),
    Lifted(LiftedDifference),
    Box(BoxSet),
    Ball(BallSet),
    Orthant(usize),
}

impl Operand {
    pub fn kind(&self) -> &'static str {
        match self {
            Operand::V(_) => "vrep",
            Operand::H(_) => "hrep",
            Operand::Lifted(_) => "hrep (lifted)",
            Operand::Box(_) => "box",
            Operand::Ball(_) => "ball",
            Operand::Orthant(_) => "orthant",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operand::V(p) => p.dim(),
            Operand::H(p) => p.dim(),
            Operand::Lifted(l) => l.n(),
            Operand::Box(b) => b.dim(),
            Operand::Ball(b) => b.dim(),
            Operand::Orthant(n) => *n,
        }
    }

    /// Half-space form of boxes, orthants and plain systems.
    pub fn as_hrep(&self) -> Option<HPolyhedron> {
        match self {
            Operand::H(p) => Some(p.clone()),
            Operand::Box(b) => Some(b.to_hrep()),
            Operand::Orthant(n) => HPolyhedron::orthant(*n).ok(),
            _ => None,
        }
    }

    /// The set as a solver input. Balls have no polyhedral form.
    pub fn to_convex(&self) -> CliResult<ConvexSet> {
        match self {
            Operand::V(p) => Ok(p.clone().into()),
            Operand::Lifted(l) => Ok(l.clone().into()),
            Operand::Ball(_) => Err(CliError::Unsupported(
                "balls are only supported in `diff` with a single-point subtrahend".into(),
            )),
            other => Ok(other.as_hrep().expect("polyhedral operand").into()),
        }
    }

    /// Fails with an empty-set error when a half-space operand is infeasible.
    pub fn ensure_nonempty(&self, tol: &ToleranceConfig) -> CliResult<()> {
        let system = match self {
            Operand::H(p) => p,
            Operand::Lifted(l) => l.system(),
            _ => return Ok(()),
        };
        if system.is_feasible(tol)? {
            Ok(())
        } else {
            Err(polydiff::Error::EmptySet.into())
        }
    }
}

impl SetDescriptor {
    pub fn new(shape: Shape) -> Self {
        Self { shape, name: None }
    }

    pub fn to_operand(&self) -> CliResult<Operand> {
        Ok(match &self.shape {
            Shape::Vrep { vertices } => {
                if vertices.is_empty() {
                    return Err(polydiff::Error::EmptySet.into());
                }
                Operand::V(VPolytope::new(vertices.clone())?)
            }
            Shape::Hrep { a, b, blocks: None } => {
                Operand::H(HPolyhedron::new(a.clone(), b.clone())?)
            }
            Shape::Hrep {
                a,
                b,
                blocks: Some(blocks),
            } => {
                let system = HPolyhedron::new(a.clone(), b.clone())?;
                let lifted = LiftedDifference::from_system(system, blocks.n)?;
                let (r1, r2) = lifted.block_rows().expect("block layout");
                if [r1, r2] != blocks.rows {
                    return Err(CliError::Parse(format!(
                        "block annotation says {:?} rows but the system has [{r1}, {r2}]",
                        blocks.rows
                    )));
                }
                Operand::Lifted(lifted)
            }
            Shape::Box { lower, upper } => Operand::Box(BoxSet::new(lower.clone(), upper.clone())?),
            Shape::Ball { center, radius } => Operand::Ball(BallSet::new(center.clone(), *radius)?),
            Shape::Orthant { dim } => {
                HPolyhedron::orthant(*dim)?;
                Operand::Orthant(*dim)
            }
        })
    }

    pub fn from_operand(op: &Operand) -> Self {
        let rows = |v: &[polydiff::Vector]| v.iter().map(|r| r.to_vec()).collect();
        Self::new(match op {
            Operand::V(p) => Shape::Vrep {
                vertices: rows(p.vertices()),
            },
            Operand::H(p) => Shape::Hrep {
                a: rows(p.rows()),
                b: p.rhs().to_vec(),
                blocks: None,
            },
            Operand::Lifted(l) => {
                let (r1, r2) = l.block_rows().expect("only block layouts are written");
                Shape::Hrep {
                    a: rows(l.system().rows()),
                    b: l.system().rhs().to_vec(),
                    blocks: Some(Blocks {
                        n: l.n(),
                        rows: [r1, r2],
                    }),
                }
            }
            Operand::Box(b) => Shape::Box {
                lower: b.lower().to_vec(),
                upper: b.upper().to_vec(),
            },
            Operand::Ball(b) => Shape::Ball {
                center: b.center().to_vec(),
                radius: b.radius(),
            },
            Operand::Orthant(n) => Shape::Orthant { dim: *n },
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_canonical(&self) -> String {
        to_canonical_string(self)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter::default());
    value.serialize(&mut ser).expect("in-memory serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Objects one key per line with two-space indent; arrays inline.
#[derive(Default)]
struct CanonicalFormatter {
    /// One entry per open object: whether it has a key yet.
    objects: Vec<bool>,
}

/// `%.17g` without trailing-zero stripping: fixed notation for exponents in
/// `[-5, 17)`, scientific otherwise. Both zeros print as `0.0000000000000000`.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{v:.16e}");
    let (_, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{v:.prec$}", prec = (16 - exp) as usize)
    } else {
        sci
    }
}

impl CanonicalFormatter {
    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.objects.len() {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.objects.push(false);
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let nonempty = self.objects.pop().expect("balanced objects");
        if nonempty {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        *self.objects.last_mut().expect("inside an object") = true;
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(1.0), "1.0000000000000000");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(-2.5), "-2.5000000000000000");
        assert_eq!(format_f64(123456.0), "123456.00000000000");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_f64(1e20), "1.0000000000000000e20");
        assert_eq!(format_f64(0.0), "0.0000000000000000");
        assert_eq!(format_f64(-0.0), "0.0000000000000000");
        for v in [
            0.1,
            1.0 / 3.0,
            -7.25e-5,
            6.02e23,
            f64::MIN_POSITIVE,
            2f64.sqrt(),
        ] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let text = r#"{"kind": "hrep", "A": [[1, 0], [0, 1]], "b": [1, 2], "name": "corner"}"#;
        let d = SetDescriptor::parse(text).unwrap();
        assert_eq!(d.name.as_deref(), Some("corner"));
        let canon = d.to_canonical();
        let again = SetDescriptor::parse(&canon).unwrap().to_canonical();
        assert_eq!(canon, again);
        assert!(canon.starts_with("{\n  \"kind\": \"hrep\""));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            SetDescriptor::parse(r#"{"kind": "cone"}"#),
            Err(CliError::Parse(_))
        ));
        assert!(matches!(
            SetDescriptor::parse(r#"{"kind": "vrep"}"#),
            Err(CliError::Parse(_))
        ));
        let ragged =
            SetDescriptor::parse(r#"{"kind": "vrep", "vertices": [[1], [1, 2]]}"#).unwrap();
        assert!(matches!(ragged.to_operand(), Err(CliError::Parse(_))));
        let empty = SetDescriptor::parse(r#"{"kind": "vrep", "vertices": []}"#).unwrap();
        assert!(matches!(empty.to_operand(), Err(CliError::Empty(_))));
    }
}
