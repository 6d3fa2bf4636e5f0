//! Parameter file loading.
//!
//! The file is TOML with a fixed schema (see `docs/parameter-format.md`).
//! Every key is required and unknown keys are rejected. Values are kcal/mol
//! with at most two decimals; they are stored as integer hundredths so that
//! energy sums are exact.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use super::{Energy, PairType};
use crate::error::ParamsError;
use crate::sequence::{Nucleotide, Sequence};

pub const FORMAT: &str = "seqsem-params/1";

/// Largest loop size with a tabulated length term.
pub const MAX_TABULATED_LOOP: usize = 30;

const DEFAULT_PARAMS: &str = include_str!("../../params/default.toml");

/// Gas constant in kcal/(mol K).
pub const GAS_CONSTANT: f64 = 1.98717e-3;

type Mismatch = [[Energy; 4]; 4];

/// Every nearest-neighbour table plus the thermal scale `RT`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyParams {
    pub name: String,
    rt: f64,
    pub(crate) stack: [[Energy; 6]; 6],
    pub(crate) hairpin: [Energy; MAX_TABULATED_LOOP + 1],
    pub(crate) bulge: [Energy; MAX_TABULATED_LOOP + 1],
    pub(crate) interior: [Energy; MAX_TABULATED_LOOP + 1],
    pub(crate) extrapolation: f64,
    pub(crate) ninio: Energy,
    pub(crate) ninio_max: Energy,
    pub(crate) terminal_au: Energy,
    pub(crate) hairpin_mismatch: [Mismatch; 6],
    pub(crate) interior_mismatch: [Mismatch; 6],
    pub(crate) special_hairpins: HashMap<Vec<Nucleotide>, Energy>,
    pub(crate) multi_alpha: Energy,
    pub(crate) multi_beta: Energy,
    pub(crate) multi_gamma: Energy,
    checksum: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    format: String,
    name: String,
    rt: f64,
    terminal: RawTerminal,
    multiloop: RawMulti,
    stack: RawPairTable<[f64; 6]>,
    hairpin: RawHairpin,
    bulge: RawBulge,
    interior: RawInterior,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerminal {
    au_penalty: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMulti {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawPairTable<T> {
    AU: T,
    UA: T,
    CG: T,
    GC: T,
    GU: T,
    UG: T,
}

impl<T> RawPairTable<T> {
    fn rows(self) -> [(PairType, T); 6] {
        [
            (PairType::AU, self.AU),
            (PairType::UA, self.UA),
            (PairType::CG, self.CG),
            (PairType::GC, self.GC),
            (PairType::GU, self.GU),
            (PairType::UG, self.UG),
        ]
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHairpin {
    length: Vec<f64>,
    extrapolation: f64,
    mismatch: RawPairTable<[[f64; 4]; 4]>,
    special: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBulge {
    length: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterior {
    length: Vec<f64>,
    ninio: f64,
    ninio_max: f64,
    mismatch: RawPairTable<[[f64; 4]; 4]>,
}

fn hundredths(key: &str, kcal: f64) -> Result<Energy, ParamsError> {
    if !kcal.is_finite() {
        return Err(ParamsError::Value {
            key: key.into(),
            message: "must be finite".into(),
        });
    }
    let scaled = kcal * 100.0;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-6 || rounded.abs() > 1e7 {
        return Err(ParamsError::Value {
            key: key.into(),
            message: format!("{kcal} needs more than two decimals or is out of range"),
        });
    }
    Ok(Energy::from_hundredths(rounded as i32))
}

fn length_table(
    key: &str,
    values: &[f64],
    first: usize,
) -> Result<[Energy; MAX_TABULATED_LOOP + 1], ParamsError> {
    let expected = MAX_TABULATED_LOOP + 1 - first;
    if values.len() != expected {
        return Err(ParamsError::Value {
            key: key.into(),
            message: format!(
                "expected {expected} entries (sizes {first}..={MAX_TABULATED_LOOP}), found {}",
                values.len()
            ),
        });
    }
    let mut table = [Energy::INFINITE; MAX_TABULATED_LOOP + 1];
    for (k, v) in values.iter().enumerate() {
        table[first + k] = hundredths(&format!("{key}[{}]", first + k), *v)?;
    }
    Ok(table)
}

fn mismatch_table(
    key: &str,
    raw: RawPairTable<[[f64; 4]; 4]>,
) -> Result<[Mismatch; 6], ParamsError> {
    let mut out = [[[Energy::ZERO; 4]; 4]; 6];
    for (pair, rows) in raw.rows() {
        let p = pair.index().expect("admissible");
        for (x, row) in rows.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                out[p][x][y] = hundredths(&format!("{key}.{pair:?}[{x}][{y}]"), *v)?;
            }
        }
    }
    Ok(out)
}

impl EnergyParams {
    /// The parameter set shipped with the crate.
    pub fn default_set() -> Self {
        Self::from_toml_str(DEFAULT_PARAMS).expect("shipped parameter file is valid")
    }

    /// Text of the shipped parameter file.
    pub fn default_source() -> &'static str {
        DEFAULT_PARAMS
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ParamsError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| ParamsError::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ParamsError> {
        let raw: RawParams =
            toml::from_str(text).map_err(|e| ParamsError::Syntax(e.to_string()))?;
        if raw.format != FORMAT {
            return Err(ParamsError::Format {
                found: raw.format,
                expected: FORMAT,
            });
        }
        if !(raw.rt.is_finite() && raw.rt > 0.0) {
            return Err(ParamsError::Value {
                key: "rt".into(),
                message: "must be positive".into(),
            });
        }
        if !raw.hairpin.extrapolation.is_finite() {
            return Err(ParamsError::Value {
                key: "hairpin.extrapolation".into(),
                message: "must be finite".into(),
            });
        }

        let mut stack = [[Energy::ZERO; 6]; 6];
        for (pair, row) in raw.stack.rows() {
            let p = pair.index().expect("admissible");
            for (q, v) in row.iter().enumerate() {
                stack[p][q] = hundredths(&format!("stack.{pair:?}[{q}]"), *v)?;
            }
        }

        let mut special_hairpins = HashMap::new();
        for (motif, v) in &raw.hairpin.special {
            let key = format!("hairpin.special.{motif}");
            let seq: Sequence = motif.parse().map_err(|e| ParamsError::Value {
                key: key.clone(),
                message: format!("{e}"),
            })?;
            let bases = seq.bases();
            let ok = matches!(bases.len(), 5 | 6)
                && super::pair_type(bases[0], bases[bases.len() - 1]).is_admissible();
            if !ok {
                return Err(ParamsError::Value {
                    key,
                    message: "expected a closing pair around 3 or 4 unpaired bases".into(),
                });
            }
            special_hairpins.insert(bases.to_vec(), hundredths(&key, *v)?);
        }

        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        let checksum = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();

        Ok(EnergyParams {
            name: raw.name,
            rt: raw.rt,
            stack,
            hairpin: length_table("hairpin.length", &raw.hairpin.length, 3)?,
            bulge: length_table("bulge.length", &raw.bulge.length, 1)?,
            interior: length_table("interior.length", &raw.interior.length, 2)?,
            extrapolation: raw.hairpin.extrapolation,
            ninio: hundredths("interior.ninio", raw.interior.ninio)?,
            ninio_max: hundredths("interior.ninio_max", raw.interior.ninio_max)?,
            terminal_au: hundredths("terminal.au_penalty", raw.terminal.au_penalty)?,
            hairpin_mismatch: mismatch_table("hairpin.mismatch", raw.hairpin.mismatch)?,
            interior_mismatch: mismatch_table("interior.mismatch", raw.interior.mismatch)?,
            special_hairpins,
            multi_alpha: hundredths("multiloop.alpha", raw.multiloop.alpha)?,
            multi_beta: hundredths("multiloop.beta", raw.multiloop.beta)?,
            multi_gamma: hundredths("multiloop.gamma", raw.multiloop.gamma)?,
            checksum,
        })
    }

    /// Thermal scale in kcal/mol.
    pub fn rt(&self) -> f64 {
        self.rt
    }

    pub fn with_rt(mut self, rt: f64) -> Self {
        assert!(rt.is_finite() && rt > 0.0, "RT must be positive");
        self.rt = rt;
        self
    }

    /// Sets `RT` from a temperature in degrees Celsius. Loop energies are
    /// not rescaled.
    pub fn with_temperature(self, celsius: f64) -> Self {
        self.with_rt(GAS_CONSTANT * (celsius + 273.15))
    }

    /// SHA-256 of the parameter file text.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn multi_constants(&self) -> (Energy, Energy, Energy) {
        (self.multi_alpha, self.multi_beta, self.multi_gamma)
    }

    pub fn stack(&self, outer: PairType, inner: PairType) -> Energy {
        match (outer.index(), inner.index()) {
            (Some(p), Some(q)) => self.stack[p][q],
            _ => Energy::INFINITE,
        }
    }

    fn extrapolate(&self, table: &[Energy; MAX_TABULATED_LOOP + 1], k: usize) -> Energy {
        if k <= MAX_TABULATED_LOOP {
            return table[k];
        }
        let extra =
            (self.extrapolation * 100.0 * (k as f64 / MAX_TABULATED_LOOP as f64).ln()).round();
        table[MAX_TABULATED_LOOP] + Energy::from_hundredths(extra as i32)
    }

    pub fn hairpin_length(&self, k: usize) -> Energy {
        self.extrapolate(&self.hairpin, k)
    }

    pub fn bulge_length(&self, k: usize) -> Energy {
        self.extrapolate(&self.bulge, k)
    }

    /// Length and asymmetry term of an interior loop with sides `k1 >= k2 >= 1`.
    pub fn interior_length(&self, k1: usize, k2: usize) -> Energy {
        let asym = (k1 - k2) as i32 * self.ninio.hundredths();
        self.extrapolate(&self.interior, k1 + k2)
            + Energy::from_hundredths(asym.min(self.ninio_max.hundredths()))
    }

    pub fn terminal_penalty(&self, pair: PairType) -> Energy {
        match pair {
            PairType::AU | PairType::UA | PairType::GU | PairType::UG => self.terminal_au,
            _ => Energy::ZERO,
        }
    }

    pub fn hairpin_mismatch(&self, pair: PairType, x: Nucleotide, y: Nucleotide) -> Energy {
        pair.index().map_or(Energy::INFINITE, |p| {
            self.hairpin_mismatch[p][x.index()][y.index()]
        })
    }

    pub fn interior_mismatch(&self, pair: PairType, x: Nucleotide, y: Nucleotide) -> Energy {
        pair.index().map_or(Energy::INFINITE, |p| {
            self.interior_mismatch[p][x.index()][y.index()]
        })
    }

    /// Bonus for a hairpin whose full sequence (closing pair included) is listed.
    pub fn special_hairpin(&self, loop_seq: &[Nucleotide]) -> Option<Energy> {
        self.special_hairpins.get(loop_seq).copied()
    }
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self::default_set()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_loads() {
        let p = EnergyParams::default_set();
        assert_eq!(p.rt(), 0.6163);
        assert_eq!(
            p.multi_constants(),
            (Energy::from_kcal(3.4), Energy::from_kcal(0.4), Energy::ZERO)
        );
        assert_eq!(p.hairpin_length(3), Energy::from_kcal(5.4));
        assert_eq!(p.bulge_length(1), Energy::from_kcal(3.8));
        assert_eq!(p.checksum().len(), 64);
        assert_eq!(p.stack(PairType::GC, PairType::CG), Energy::from_kcal(-3.3));
    }

    #[test]
    fn default_rt_matches_body_temperature() {
        let p = EnergyParams::default_set().with_temperature(37.0);
        assert!((p.rt() - 0.6163).abs() < 1e-4);
    }

    #[test]
    fn extrapolation_beyond_table() {
        let p = EnergyParams::default_set();
        let expected =
            p.hairpin_length(30).hundredths() + (107.856 * (60.0f64 / 30.0).ln()).round() as i32;
        assert_eq!(p.hairpin_length(60).hundredths(), expected);
        assert!(p.interior_length(40, 1) > p.interior_length(20, 1));
    }

    #[test]
    fn asymmetry_is_capped() {
        let p = EnergyParams::default_set();
        let sym = p.interior_length(2, 2);
        assert_eq!(
            p.interior_length(3, 1),
            p.extrapolate(&p.interior, 4) + Energy::from_kcal(1.2)
        );
        assert_eq!(p.interior_length(2, 2), sym);
        assert_eq!(
            p.interior_length(20, 1) - p.extrapolate(&p.interior, 21),
            Energy::from_kcal(3.0)
        );
    }

    #[test]
    fn missing_key_is_an_error() {
        let text = EnergyParams::default_source().replace("gamma = 0.0", "");
        let err = EnergyParams::from_toml_str(&text).unwrap_err();
        assert!(
            matches!(err, ParamsError::Syntax(ref m) if m.contains("gamma")),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_is_an_error() {
        let text =
            EnergyParams::default_source().replace("gamma = 0.0", "gamma = 0.0\ndelta = 1.0");
        assert!(EnergyParams::from_toml_str(&text).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let src = EnergyParams::default_source();
        assert!(matches!(
            EnergyParams::from_toml_str(&src.replace("rt = 0.6163", "rt = -1.0")),
            Err(ParamsError::Value { .. })
        ));
        assert!(matches!(
            EnergyParams::from_toml_str(&src.replace("alpha = 3.4", "alpha = 3.405")),
            Err(ParamsError::Value { .. })
        ));
        assert!(matches!(
            EnergyParams::from_toml_str(&src.replace("seqsem-params/1", "other/2")),
            Err(ParamsError::Format { .. })
        ));
        assert!(matches!(
            EnergyParams::from_toml_str(&src.replace("GGGGAC = -3.0", "GGGGAAC = -3.0")),
            Err(ParamsError::Value { .. })
        ));
    }
}
