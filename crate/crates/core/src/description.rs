//! JSON module descriptions and the built-in fixtures.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graded::presentation::SignedMonomial;
use crate::graded::{
    box_module_of_ideal, cokernel_box_module, curve_ideal, direct_sum, ext1, ideal_presentation, BoxModule,
    CurveProfile, Edge, Exponent, ModuleBox, MonomialIdeal, MonomialMatrix, MonomialPresentation, Weight,
    VARIABLES,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub weight: Weight,
    #[serde(default)]
    pub color: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub var: char,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDescription {
    /// A monomial ideal, as a module.
    Ideal { generators: Vec<Exponent> },
    /// The ideal of a monomial curve given by its axis cross-sections.
    Curve {
        #[serde(default)]
        x: Vec<[u32; 2]>,
        #[serde(default)]
        y: Vec<[u32; 2]>,
        #[serde(default)]
        z: Vec<[u32; 2]>,
    },
    /// `coker(matrix)`; rows index generators of `F_0`.
    Cokernel {
        matrix: MonomialMatrix,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<Vec<Weight>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        colors: Option<Vec<Vec<u32>>>,
    },
    /// A complex whose part from `module_position` up resolves the module.
    Complex {
        differentials: Vec<MonomialMatrix>,
        #[serde(default)]
        module_position: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<Vec<Weight>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        colors: Option<Vec<Vec<u32>>>,
    },
    DirectSum { summands: Vec<ModuleDescription> },
    /// A finite-length module by its boxes; without `edges` every variable
    /// step between present boxes of one color is an edge.
    FiniteBoxes {
        boxes: Vec<BoxSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edges: Option<Vec<EdgeSpec>>,
    },
}

#[derive(Clone, Debug)]
enum Kind {
    Ideal(MonomialIdeal),
    Presented(MonomialPresentation),
    Sum(Vec<Module>),
    Boxes(BoxModule),
}

/// A validated description, ready for computation.
#[derive(Clone, Debug)]
pub struct Module {
    description: ModuleDescription,
    profile: Option<CurveProfile>,
    kind: Kind,
}

fn located(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse { location: path.to_string(), message: other.to_string() },
    }
}

impl ModuleDescription {
    pub fn resolve(&self) -> Result<Module> {
        self.resolve_at("$")
    }

    fn resolve_at(&self, path: &str) -> Result<Module> {
        let loc = located(path);
        let mut profile = None;
        let kind = match self {
            ModuleDescription::Ideal { generators } => Kind::Ideal(
                MonomialIdeal::new(generators.clone()).map_err(|e| located(&format!("{path}.generators"))(e))?,
            ),
            ModuleDescription::Curve { x, y, z } => {
                let p = CurveProfile::new([x.clone(), y.clone(), z.clone()]).map_err(&loc)?;
                let ideal = curve_ideal(&p).map_err(&loc)?.ideal;
                profile = Some(p);
                Kind::Ideal(ideal)
            }
            ModuleDescription::Cokernel { matrix, degrees, colors } => {
                let rank0 = matrix.len();
                Kind::Presented(
                    MonomialPresentation::from_matrices(rank0, vec![matrix.clone()], 0, degrees.clone(), colors.clone())
                        .map_err(|e| located(&format!("{path}.matrix"))(e))?,
                )
            }
            ModuleDescription::Complex { differentials, module_position, degrees, colors } => {
                let Some(first) = differentials.first() else {
                    return Err(loc(Error::Invariant("a complex needs at least one differential".into())));
                };
                Kind::Presented(
                    MonomialPresentation::from_matrices(
                        first.len(),
                        differentials.clone(),
                        *module_position,
                        degrees.clone(),
                        colors.clone(),
                    )
                    .map_err(|e| located(&format!("{path}.differentials"))(e))?,
                )
            }
            ModuleDescription::DirectSum { summands } => Kind::Sum(
                summands
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.resolve_at(&format!("{path}.summands[{i}]")))
                    .collect::<Result<_>>()?,
            ),
            ModuleDescription::FiniteBoxes { boxes, edges } => {
                let boxes: Vec<ModuleBox> = boxes.iter().map(|b| ModuleBox::new(b.weight, b.color)).collect();
                let module = match edges {
                    None => BoxModule::from_boxes_full_edges(boxes),
                    Some(edges) => edges
                        .iter()
                        .map(|e| {
                            VARIABLES.iter().position(|&v| v == e.var).map(|var| Edge { var, from: e.from, to: e.to }).ok_or_else(
                                || Error::InvalidArgument(format!("unknown variable '{}'", e.var)),
                            )
                        })
                        .collect::<Result<Vec<_>>>()
                        .and_then(|edges| BoxModule::new(boxes, edges, crate::graded::Truncation::Finite)),
                };
                Kind::Boxes(module.map_err(|e| located(&format!("{path}.boxes"))(e))?)
            }
        };
        Ok(Module { description: self.clone(), profile, kind })
    }
}

impl Module {
    pub fn description(&self) -> &ModuleDescription {
        &self.description
    }

    /// The curve profile, when the description is a curve.
    pub fn curve_profile(&self) -> Option<&CurveProfile> {
        self.profile.as_ref()
    }

    /// A free presentation (finite box modules have none here).
    pub fn presentation(&self) -> Result<MonomialPresentation> {
        match &self.kind {
            Kind::Ideal(i) => ideal_presentation(i),
            Kind::Presented(p) => Ok(p.clone()),
            Kind::Sum(parts) => {
                let ps = parts.iter().map(|m| m.presentation()).collect::<Result<Vec<_>>>()?;
                Ok(MonomialPresentation::direct_sum(&ps))
            }
            Kind::Boxes(_) => Err(Error::InvalidArgument(
                "finite_boxes modules carry no presentation; describe them by a cokernel instead".into(),
            )),
        }
    }

    /// Box model: whole if finite, else boxes with down-set at most `bound`.
    pub fn box_module(&self, bound: usize) -> Result<BoxModule> {
        match &self.kind {
            Kind::Ideal(i) => box_module_of_ideal(i, bound.max(1)),
            Kind::Presented(p) => cokernel_box_module(p, bound),
            Kind::Sum(parts) => {
                Ok(direct_sum(&parts.iter().map(|m| m.box_module(bound)).collect::<Result<Vec<_>>>()?))
            }
            Kind::Boxes(b) => Ok(b.clone()),
        }
    }

    pub fn ext1(&self, bound: usize) -> Result<BoxModule> {
        match &self.kind {
            Kind::Boxes(_) => Err(Error::InvalidArgument("Ext^1 needs a presentation".into())),
            _ => ext1(&self.presentation()?, bound),
        }
    }

    pub fn rank(&self) -> Result<i64> {
        match &self.kind {
            Kind::Boxes(_) => Ok(0),
            _ => Ok(self.presentation()?.rank()),
        }
    }
}

pub fn parse_module_str(text: &str) -> Result<Module> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    description_at(&value, "$")?.resolve()
}

fn shape_error(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { location: path.to_string(), message: message.into() }
}

fn field<T: DeserializeOwned>(obj: &Map<String, Value>, name: &str, path: &str) -> Result<Option<T>> {
    obj.get(name)
        .filter(|v| !v.is_null())
        .map(|v| T::deserialize(v).map_err(|e| shape_error(&format!("{path}.{name}"), e.to_string())))
        .transpose()
}

fn required<T: DeserializeOwned>(obj: &Map<String, Value>, name: &str, path: &str) -> Result<T> {
    field(obj, name, path)?.ok_or_else(|| shape_error(path, format!("missing field \"{name}\"")))
}

/// Reads a description from parsed JSON, reporting errors by JSON path.
fn description_at(value: &Value, path: &str) -> Result<ModuleDescription> {
    use ModuleDescription as D;
    let obj = value.as_object().ok_or_else(|| shape_error(path, "expected an object"))?;
    let kind: String = required(obj, "kind", path)?;
    let allowed: &[&str] = match kind.as_str() {
        "ideal" => &["generators"],
        "curve" => &["x", "y", "z"],
        "cokernel" => &["matrix", "degrees", "colors"],
        "complex" => &["differentials", "module_position", "degrees", "colors"],
        "direct_sum" => &["summands"],
        "finite_boxes" => &["boxes", "edges"],
        other => return Err(shape_error(&format!("{path}.kind"), format!("unknown kind \"{other}\""))),
    };
    if let Some(extra) = obj.keys().find(|k| *k != "kind" && !allowed.contains(&k.as_str())) {
        return Err(shape_error(path, format!("unknown field \"{extra}\" for kind \"{kind}\"")));
    }
    Ok(match kind.as_str() {
        "ideal" => D::Ideal { generators: required(obj, "generators", path)? },
        "curve" => D::Curve {
            x: field(obj, "x", path)?.unwrap_or_default(),
            y: field(obj, "y", path)?.unwrap_or_default(),
            z: field(obj, "z", path)?.unwrap_or_default(),
        },
        "cokernel" => D::Cokernel {
            matrix: required(obj, "matrix", path)?,
            degrees: field(obj, "degrees", path)?,
            colors: field(obj, "colors", path)?,
        },
        "complex" => D::Complex {
            differentials: required(obj, "differentials", path)?,
            module_position: field(obj, "module_position", path)?.unwrap_or(0),
            degrees: field(obj, "degrees", path)?,
            colors: field(obj, "colors", path)?,
        },
        "direct_sum" => {
            let items: Vec<Value> = required(obj, "summands", path)?;
            D::DirectSum {
                summands: items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| description_at(v, &format!("{path}.summands[{i}]")))
                    .collect::<Result<_>>()?,
            }
        }
        _ => D::FiniteBoxes { boxes: required(obj, "boxes", path)?, edges: field(obj, "edges", path)? },
    })
}

pub fn parse_module_file(path: &Path) -> Result<Module> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_module_str(&text).map_err(|e| match e {
        Error::Parse { location, message } => {
            Error::Parse { location: format!("{}: {location}", path.display()), message }
        }
        other => other,
    })
}

pub const FIXTURE_NAMES: [&str; 11] = [
    "line",
    "line-y",
    "two-axes",
    "fat-line",
    "rank2-R",
    "free-r2",
    "lines-sum",
    "free-plus-line",
    "bad-hd2",
    "skyscraper",
    "fat-point",
];

fn entry(exp: Exponent) -> Option<SignedMonomial> {
    Some(SignedMonomial::new(1, exp))
}

fn reduced_axis(axis: usize) -> ModuleDescription {
    let mut s: [Vec<[u32; 2]>; 3] = Default::default();
    s[axis] = vec![[0, 0]];
    let [x, y, z] = s;
    ModuleDescription::Curve { x, y, z }
}

pub fn fixture(name: &str) -> Result<ModuleDescription> {
    use ModuleDescription as D;
    Ok(match name {
        "line" => reduced_axis(0),
        "line-y" => reduced_axis(1),
        "two-axes" => D::Curve { x: vec![[0, 0]], y: vec![[0, 0]], z: vec![] },
        "fat-line" => D::Curve { x: vec![[0, 0], [1, 0]], y: vec![], z: vec![] },
        "rank2-R" => D::Cokernel {
            matrix: vec![vec![entry([1, 0, 0])], vec![entry([0, 1, 0])], vec![entry([0, 0, 1])]],
            degrees: None,
            colors: None,
        },
        "free-r2" => D::Cokernel { matrix: vec![vec![], vec![]], degrees: None, colors: None },
        "lines-sum" => D::DirectSum { summands: vec![reduced_axis(0), reduced_axis(1)] },
        "free-plus-line" => D::DirectSum {
            summands: vec![D::Ideal { generators: vec![[0, 0, 0]] }, reduced_axis(0)],
        },
        "bad-hd2" => D::Ideal { generators: vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]] },
        "skyscraper" => D::FiniteBoxes { boxes: vec![BoxSpec { weight: [0, 0, 0], color: 0 }], edges: None },
        "fat-point" => D::FiniteBoxes {
            boxes: vec![BoxSpec { weight: [0, 0, 0], color: 0 }, BoxSpec { weight: [1, 0, 0], color: 0 }],
            edges: None,
        },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown fixture '{other}' (known: {})",
                FIXTURE_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let m = parse_module_str(r#"{"kind":"ideal","generators":[[0,1,0],[0,0,1]]}"#).unwrap();
        assert_eq!(m.box_module(1).unwrap().len(), 2);
        let r = parse_module_str(
            r#"{"kind":"cokernel","matrix":[[{"sign":1,"exp":[1,0,0]}],[{"sign":1,"exp":[0,1,0]}],[{"sign":1,"exp":[0,0,1]}]]}"#,
        )
        .unwrap();
        assert_eq!(r.rank().unwrap(), 2);
        assert_eq!(r.presentation().unwrap(), fixture("rank2-R").unwrap().resolve().unwrap().presentation().unwrap());
    }

    #[test]
    fn antichain_error() {
        let err = parse_module_str(r#"{"kind":"ideal","generators":[[0,1,0],[0,2,0]]}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not an antichain"), "{msg}");
        assert!(msg.contains("$.generators"), "{msg}");
    }

    #[test]
    fn positioned_errors() {
        let err = parse_module_str("{\"kind\":\"ideal\",\n\"generators\":[[0,1]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_module_str(r#"{"kind":"ideal","generators":[[0,1]]}"#).unwrap_err();
        assert!(err.to_string().contains("$.generators"), "{err}");
        let err = parse_module_str(r#"{"kind":"ideal","gens":[]}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
        let err = parse_module_str(
            r#"{"kind":"direct_sum","summands":[{"kind":"ideal","generators":[[1,0,0]]},{"kind":"curve","x":[[1,0]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("$.summands[1]"), "{err}");
        assert!(err.to_string().contains("downward closed"), "{err}");
        let err = parse_module_str(
            r#"{"kind":"complex","differentials":[[[{"sign":1,"exp":[1,0,0]}]],[[{"sign":1,"exp":[0,1,0]}]]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("!= 0"), "{err}");
    }

    #[test]
    fn fixtures_round_trip() {
        for name in FIXTURE_NAMES {
            let d = fixture(name).unwrap();
            let text = serde_json::to_string_pretty(&d).unwrap();
            let back: ModuleDescription = serde_json::from_str(&text).unwrap();
            assert_eq!(back, d, "{name}");
            back.resolve().unwrap();
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn fixture_ranks() {
        let rank = |n: &str| fixture(n).unwrap().resolve().unwrap().rank().unwrap();
        assert_eq!(rank("line"), 1);
        assert_eq!(rank("rank2-R"), 2);
        assert_eq!(rank("free-r2"), 2);
        assert_eq!(rank("lines-sum"), 2);
        assert_eq!(rank("free-plus-line"), 2);
    }

    #[test]
    fn curve_ideals() {
        let m = fixture("two-axes").unwrap().resolve().unwrap();
        assert!(m.curve_profile().is_some());
        assert_eq!(m.box_module(1).unwrap().len(), 2);
    }
}
