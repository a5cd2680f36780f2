//! Configuration file schema (JSON) and the `--set key=value` override
//! mechanism. Parsing lives here; semantic validation of the resulting
//! model data lives in the model module.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{
    derived_constant_params, BeamSpec, BoundaryControls, CoefficientField, InitialConditions,
    Profile,
};

/// A coefficient entry: a scalar, a piecewise-constant description, or
/// uniform-grid samples.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Scalar(f64),
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Samples {
        samples: Vec<f64>,
    },
}

impl FieldSpec {
    fn to_field(&self) -> CoefficientField {
        match self {
            FieldSpec::Scalar(v) => CoefficientField::Constant(*v),
            FieldSpec::Piecewise {
                breakpoints,
                values,
            } => CoefficientField::Piecewise {
                breakpoints: breakpoints.clone(),
                values: values.clone(),
            },
            FieldSpec::Samples { samples } => CoefficientField::Sampled {
                values: samples.clone(),
            },
        }
    }
}

/// A profile entry: a named closed form, raw samples, or a shaped closed
/// form with an amplitude.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Name(String),
    Samples(Vec<f64>),
    Shaped { shape: String, amplitude: f64 },
}

impl ProfileSpec {
    fn to_profile(&self) -> Result<Profile> {
        match self {
            ProfileSpec::Name(name) => match name.as_str() {
                "demo" => Ok(Profile::Demo { amplitude: 0.01 }),
                "zero" => Ok(Profile::Zero),
                "halfsine" => Ok(Profile::HalfSine { amplitude: 0.01 }),
                other => Err(Error::Config(format!(
                    "unknown profile name {other:?}; expected demo, zero, or halfsine"
                ))),
            },
            ProfileSpec::Samples(values) => Ok(Profile::Samples(values.clone())),
            ProfileSpec::Shaped { shape, amplitude } => match shape.as_str() {
                "demo" => Ok(Profile::Demo {
                    amplitude: *amplitude,
                }),
                "halfsine" => Ok(Profile::HalfSine {
                    amplitude: *amplitude,
                }),
                other => Err(Error::Config(format!("unknown profile shape {other:?}"))),
            },
        }
    }
}

/// Uniform rectangular section data, an alternative to giving `m` and `r`
/// directly.
#[derive(Debug, Clone, Deserialize)]
pub struct SectionSpec {
    pub rho: f64,
    #[serde(alias = "E")]
    pub young: f64,
    pub b: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct MeshSpec {
    pub n_elements: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct IntegratorSpec {
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub snapshot_stride: Option<usize>,
    pub newmark_beta: Option<f64>,
    pub newmark_gamma: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct SweepSpec {
    pub gamma_list: Option<Vec<f64>>,
    /// Symmetric damper values applied to both ends.
    pub ka_list: Option<Vec<f64>>,
    pub ka_left_list: Option<Vec<f64>>,
    pub ka_right_list: Option<Vec<f64>>,
    /// "table", "auto", or a fixed number (as JSON number).
    pub lambda_policy: Option<Value>,
    #[serde(default)]
    pub simulate: bool,
    /// "exact" (default) or "table" for the reference table's
    /// fixed-precision arithmetic.
    pub rounding: Option<String>,
    pub max_points: Option<usize>,
    pub max_sim_points: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct CheckSpec {
    pub profiles: Option<usize>,
    pub seed: Option<u64>,
    pub suite: Option<String>,
    pub beta0_scale: Option<f64>,
    pub beta1_scale: Option<f64>,
    pub length: Option<f64>,
}

/// Top-level configuration file.
#[derive(Debug, Clone, Deserialize, Default)]
pub struct FileConfig {
    pub length: Option<f64>,
    pub gamma: Option<f64>,
    pub m: Option<FieldSpec>,
    pub mu: Option<FieldSpec>,
    pub r: Option<FieldSpec>,
    pub section: Option<SectionSpec>,
    pub kr_left: Option<f64>,
    pub ka_left: Option<f64>,
    pub kr_right: Option<f64>,
    pub ka_right: Option<f64>,
    pub u0: Option<ProfileSpec>,
    pub u1: Option<ProfileSpec>,
    pub lambda: Option<f64>,
    pub horizon: Option<f64>,
    #[serde(default)]
    pub mesh: MeshSpec,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub check: CheckSpec,
    #[serde(default)]
    pub dump_matrices: bool,
    // table command knobs live at the top level so flat overrides reach them
    pub gamma_list: Option<Vec<f64>>,
    pub lambda_policy: Option<Value>,
    pub seed: Option<u64>,
    // accepted for forward compatibility in check overrides
    pub profiles: Option<usize>,
    pub suite: Option<String>,
    pub beta0_scale: Option<f64>,
}

/// Loads a config file (or starts from an empty object) and applies the
/// `--set key=value` overrides, then deserializes.
pub fn load_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<FileConfig> {
    let mut value: Value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{} is not valid JSON: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for (key, raw) in overrides {
        apply_override(&mut value, key, raw)?;
    }
    serde_json::from_value(value).map_err(|e| Error::Config(format!("bad config shape: {e}")))
}

/// Sets `value` at a dotted path, parsing the payload as JSON when possible
/// and falling back to a plain string.
fn apply_override(root: &mut Value, key: &str, raw: &str) -> Result<()> {
    let parsed: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::Config(format!("empty segment in override key {key:?}")));
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?} descends into a non-object")))?;
        if i == parts.len() - 1 {
            obj.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("override paths always terminate")
}

/// Assembled model-side inputs.
pub struct ModelInputs {
    pub spec: BeamSpec,
    pub controls: BoundaryControls,
    pub ic: InitialConditions,
}

/// Builds the model data from a config, deriving `m`/`r` from section data
/// when given and defaulting `mu = gamma * m`.
pub fn build_model(cfg: &FileConfig) -> Result<ModelInputs> {
    let length = cfg
        .length
        .ok_or_else(|| Error::Config("config is missing \"length\"".into()))?;
    let gamma = cfg.gamma.unwrap_or(0.0);

    let (m_field, r_field) = match (&cfg.m, &cfg.r, &cfg.section) {
        (Some(m), Some(r), _) => (m.to_field(), r.to_field()),
        (None, None, Some(sec)) => {
            let p = derived_constant_params(sec.rho, sec.young, sec.b, sec.h)?;
            (
                CoefficientField::Constant(p.mass_per_length),
                CoefficientField::Constant(p.rigidity),
            )
        }
        (Some(m), None, Some(sec)) => {
            let p = derived_constant_params(sec.rho, sec.young, sec.b, sec.h)?;
            (m.to_field(), CoefficientField::Constant(p.rigidity))
        }
        (None, Some(r), Some(sec)) => {
            let p = derived_constant_params(sec.rho, sec.young, sec.b, sec.h)?;
            (CoefficientField::Constant(p.mass_per_length), r.to_field())
        }
        _ => {
            return Err(Error::Config(
                "config needs either \"m\" and \"r\" or a \"section\" block".into(),
            ))
        }
    };

    let mu_field = match &cfg.mu {
        Some(mu) => mu.to_field(),
        None => m_field.scaled(gamma),
    };

    let spec = BeamSpec {
        length,
        mass_density: m_field,
        damping: mu_field,
        rigidity: r_field,
        gamma,
    };
    let controls = BoundaryControls {
        kr_left: cfg.kr_left.unwrap_or(0.0),
        ka_left: cfg.ka_left.unwrap_or(0.0),
        kr_right: cfg.kr_right.unwrap_or(0.0),
        ka_right: cfg.ka_right.unwrap_or(0.0),
    };
    let ic = InitialConditions {
        deflection: cfg
            .u0
            .as_ref()
            .map(|p| p.to_profile())
            .transpose()?
            .unwrap_or(Profile::Demo { amplitude: 0.01 }),
        velocity: cfg
            .u1
            .as_ref()
            .map(|p| p.to_profile())
            .transpose()?
            .unwrap_or(Profile::Zero),
    };
    Ok(ModelInputs {
        spec,
        controls,
        ic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_reach_nested_keys() {
        let mut v: Value = serde_json::json!({"mesh": {"n_elements": 8}});
        apply_override(&mut v, "mesh.n_elements", "32").unwrap();
        apply_override(&mut v, "gamma_list", "[0.1]").unwrap();
        apply_override(&mut v, "lambda_policy", "auto").unwrap();
        assert_eq!(v["mesh"]["n_elements"], 32);
        assert_eq!(v["gamma_list"][0], 0.1);
        assert_eq!(v["lambda_policy"], "auto");
    }

    #[test]
    fn section_block_derives_constants() {
        let cfg: FileConfig = serde_json::from_value(serde_json::json!({
            "length": 0.502,
            "gamma": 0.1,
            "section": {"rho": 1.42e3, "E": 3.1e9, "b": 1.7e-3, "h": 0.89e-3}
        }))
        .unwrap();
        let model = build_model(&cfg).unwrap();
        let m = model.spec.mass_density.as_constant().unwrap();
        assert!((m - 2.14846e-3).abs() < 1e-8);
        let mu = model.spec.damping.as_constant().unwrap();
        assert!((mu - 0.1 * m).abs() < 1e-18);
    }

    #[test]
    fn missing_material_data_is_config_error() {
        let cfg: FileConfig = serde_json::from_value(serde_json::json!({"length": 1.0})).unwrap();
        assert!(matches!(build_model(&cfg), Err(Error::Config(_))));
    }
}
