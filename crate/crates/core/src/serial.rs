//! JSON shapes for every value that crosses the command line. Rationals are
//! always written as `"num/den"` strings.

use serde::{Deserialize, Serialize};

use crate::cohom::{AmbientSpace, BundleSpec, CohClass, CurveClass, LineBundle};
use crate::error::{Error, Result};
use crate::exact::{parse_fraction, to_fraction_string};
use crate::invariants::SerreReport;
use crate::mirror::MirrorMap;
use crate::series::{HbarLaurent, QSeries, ScalarQSeries};
use crate::twist::GeometrySpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerm {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HbarTerm {
    pub pow: i32,
    pub class: Vec<ClassTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub beta: Vec<u32>,
    pub hbar: Vec<HbarTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesJson {
    #[serde(rename = "D")]
    pub max_degree: u32,
    pub terms: Vec<SeriesTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineJson {
    pub l: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryJson {
    pub ambient: Vec<u32>,
    pub bundle: Vec<LineJson>,
    #[serde(default)]
    pub external_j: Option<QSeriesJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub beta: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorMapJson {
    pub f0: Vec<Coefficient>,
    pub f1: Vec<Vec<Coefficient>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRowJson {
    pub beta: Vec<u32>,
    #[serde(rename = "N")]
    pub big_n: String,
    pub n: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReportJson {
    pub geometry: GeometryJson,
    pub d: u32,
    pub value: String,
    pub weights_used: Vec<i64>,
    pub graphs_evaluated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreReportJson {
    pub sign: i32,
    pub solved: bool,
    pub obstructed: Option<Vec<u32>>,
    pub phi: Vec<Coefficient>,
    pub map: MirrorMapJson,
    pub needs_phi: bool,
    pub needs_map: bool,
    pub ambiguous: Vec<Vec<u32>>,
    pub residual: QSeriesJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub module: String,
    pub kind: String,
    pub beta: Option<Vec<u32>>,
    pub message: String,
}

impl From<&Error> for ErrorJson {
    fn from(e: &Error) -> Self {
        Self {
            module: e.module().into(),
            kind: e.kind().into(),
            beta: e.beta().map(<[u32]>::to_vec),
            message: e.to_string(),
        }
    }
}

pub fn class_to_json(c: &CohClass) -> Vec<ClassTerm> {
    c.terms()
        .map(|(exp, x)| ClassTerm {
            exp: exp.to_vec(),
            coeff: to_fraction_string(x),
        })
        .collect()
}

pub fn class_from_json(space: &AmbientSpace, terms: &[ClassTerm]) -> Result<CohClass> {
    let mut out = CohClass::zero(space);
    for t in terms {
        out += &CohClass::monomial(space, &t.exp, parse_fraction(&t.coeff)?)?;
    }
    Ok(out)
}

pub fn qseries_to_json(s: &QSeries) -> QSeriesJson {
    QSeriesJson {
        max_degree: s.max_degree(),
        terms: s
            .terms()
            .map(|(beta, v)| SeriesTerm {
                beta: beta.0.clone(),
                hbar: v
                    .terms()
                    .rev()
                    .map(|(pow, c)| HbarTerm {
                        pow,
                        class: class_to_json(c),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn qseries_from_json(space: &AmbientSpace, j: &QSeriesJson) -> Result<QSeries> {
    let mut out = QSeries::zero(space, j.max_degree);
    for t in &j.terms {
        let beta = CurveClass(t.beta.clone());
        let mut value = out.coeff(&beta);
        for h in &t.hbar {
            value += &HbarLaurent::monomial(class_from_json(space, &h.class)?, h.pow);
        }
        out.set(beta, value)?;
    }
    Ok(out)
}

pub fn geometry_to_json(g: &GeometrySpec) -> GeometryJson {
    GeometryJson {
        ambient: g.ambient().factors().to_vec(),
        bundle: g
            .bundle()
            .lines
            .iter()
            .map(|l| LineJson { l: l.l.clone() })
            .collect(),
        external_j: g.external_j().map(qseries_to_json),
    }
}

pub fn geometry_from_json(j: &GeometryJson) -> Result<GeometrySpec> {
    let space = AmbientSpace::new(j.ambient.clone())?;
    let bundle = BundleSpec::new(j.bundle.iter().map(|l| LineBundle::new(l.l.clone())).collect());
    let external = j
        .external_j
        .as_ref()
        .map(|e| qseries_from_json(&space, e))
        .transpose()?;
    GeometrySpec::new(space, bundle, external)
}

pub fn parse_geometry(text: &str) -> Result<GeometrySpec> {
    let j: GeometryJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    geometry_from_json(&j)
}

pub fn scalar_to_json(s: &ScalarQSeries) -> Vec<Coefficient> {
    s.terms()
        .map(|(beta, c)| Coefficient {
            beta: beta.0.clone(),
            coeff: to_fraction_string(c),
        })
        .collect()
}

pub fn scalar_from_json(nvars: usize, max_degree: u32, j: &[Coefficient]) -> Result<ScalarQSeries> {
    let coeffs = j
        .iter()
        .map(|c| {
            if c.beta.len() != nvars {
                return Err(Error::Parse(format!("curve class {:?} has wrong arity", c.beta)));
            }
            Ok((CurveClass(c.beta.clone()), parse_fraction(&c.coeff)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScalarQSeries::from_coeffs(nvars, max_degree, coeffs))
}

pub fn map_to_json(m: &MirrorMap) -> MirrorMapJson {
    MirrorMapJson {
        f0: scalar_to_json(&m.f0),
        f1: m.f1.iter().map(scalar_to_json).collect(),
    }
}

pub fn map_from_json(nvars: usize, max_degree: u32, j: &MirrorMapJson) -> Result<MirrorMap> {
    MirrorMap::new(
        scalar_from_json(nvars, max_degree, &j.f0)?,
        j.f1.iter()
            .map(|f| scalar_from_json(nvars, max_degree, f))
            .collect::<Result<_>>()?,
    )
}

pub fn serre_to_json(sign: i32, r: &SerreReport) -> SerreReportJson {
    SerreReportJson {
        sign,
        solved: r.is_solved(),
        obstructed: r.obstructed.as_ref().map(|b| b.0.clone()),
        phi: scalar_to_json(&r.phi),
        map: map_to_json(&r.map),
        needs_phi: r.needs_phi(),
        needs_map: r.needs_map(),
        ambiguous: r.ambiguous.iter().map(|b| b.0.clone()).collect(),
        residual: qseries_to_json(&r.residual),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, q};
    use crate::twist::j_ambient;

    #[test]
    fn class_format() {
        let p4 = AmbientSpace::projective(4).unwrap();
        let c = CohClass::hyperplane(&p4, 0).scale(&frac(-3, 2));
        let j = class_to_json(&c);
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"[{"exp":[1],"coeff":"-3/2"}]"#
        );
        assert_eq!(class_from_json(&p4, &j).unwrap(), c);
        let one = class_to_json(&CohClass::one(&p4));
        assert_eq!(one[0].coeff, "1/1");
    }

    #[test]
    fn series_round_trip() {
        let s = AmbientSpace::new(vec![1, 2]).unwrap();
        let j = j_ambient(&s, 3);
        let back = qseries_from_json(&s, &qseries_to_json(&j)).unwrap();
        assert_eq!(back, j);
        let text = serde_json::to_string(&qseries_to_json(&j)).unwrap();
        assert!(text.starts_with(r#"{"D":3,"terms":[{"beta":[0,0],"hbar":[{"pow":0"#));
    }

    #[test]
    fn geometry_parsing() {
        let g = parse_geometry(r#"{"ambient":[4],"bundle":[{"l":[5]}],"external_j":null}"#).unwrap();
        assert_eq!(g.ambient().factors(), &[4]);
        assert_eq!(g.bundle().lines[0].l, vec![5]);
        assert!(matches!(parse_geometry("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_geometry(r#"{"ambient":[1,1],"bundle":[{"l":[1,-1]}]}"#),
            Err(Error::Unclassifiable { .. })
        ));
    }

    #[test]
    fn map_round_trip() {
        let mut m = MirrorMap::zero(1, 2);
        m.f0.set(CurveClass(vec![1]), q(-120));
        let back = map_from_json(1, 2, &map_to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
}
