//! Station-wise sample schema and its columnar store.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io_util::{atomic_write, fmt_f64};

/// One column of the sample schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Z,
    Tb,
    Hb,
    Pb,
    Vb,
    G,
    Q,
    R,
    A,
    Ar,
    D,
    Tw,
}

impl Field {
    pub const ALL: [Field; 12] = [
        Field::Z,
        Field::Tb,
        Field::Hb,
        Field::Pb,
        Field::Vb,
        Field::G,
        Field::Q,
        Field::R,
        Field::A,
        Field::Ar,
        Field::D,
        Field::Tw,
    ];

    /// Input columns (everything except the wall-temperature label).
    pub const INPUTS: [Field; 11] = [
        Field::Z,
        Field::Tb,
        Field::Hb,
        Field::Pb,
        Field::Vb,
        Field::G,
        Field::Q,
        Field::R,
        Field::A,
        Field::Ar,
        Field::D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Field::Z => "z",
            Field::Tb => "T_b",
            Field::Hb => "h_b",
            Field::Pb => "p_b",
            Field::Vb => "v_b",
            Field::G => "G",
            Field::Q => "q",
            Field::R => "r",
            Field::A => "A",
            Field::Ar => "AR",
            Field::D => "d",
            Field::Tw => "T_w",
        }
    }

    pub fn unit(self) -> Option<&'static str> {
        match self {
            Field::Z => Some("mm"),
            Field::Tb | Field::Tw => Some("K"),
            Field::Hb => Some("J/kg"),
            Field::Pb => Some("Pa"),
            Field::Vb => Some("m/s"),
            Field::G => Some("kg/m2.s"),
            Field::Q => Some("W/m2"),
            Field::R => Some("um"),
            Field::A => Some("mm2"),
            Field::Ar => None,
            Field::D => Some("mm"),
        }
    }

    /// Column header with its unit, e.g. `p_b[Pa]`.
    pub fn header(self) -> String {
        match self.unit() {
            Some(u) => format!("{}[{u}]", self.name()),
            None => self.name().to_string(),
        }
    }

    /// Accepts a bare name (`p_b`) or a header with a unit suffix (`p_b[Pa]`).
    pub fn parse(s: &str) -> Option<Field> {
        let bare = s.split('[').next().unwrap_or("").trim();
        Field::ALL.into_iter().find(|f| f.name() == bare)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// One channel station: bulk state, operating point and geometry, with the
/// maximum hot-gas-side wall temperature as label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRecord {
    /// Stream-wise position [mm].
    pub z: f64,
    /// Bulk temperature [K].
    pub t_b: f64,
    /// Bulk static enthalpy [J/kg].
    pub h_b: f64,
    /// Bulk static pressure [Pa].
    pub p_b: f64,
    /// Bulk velocity [m/s].
    pub v_b: f64,
    /// Mass flux [kg/(m²·s)].
    pub g: f64,
    /// Local hot-gas heat flux [W/m²].
    pub q: f64,
    /// Roughness [µm].
    pub r: f64,
    /// Cross-section area [mm²].
    pub a: f64,
    /// Aspect ratio height / width.
    pub ar: f64,
    /// Hot-gas wall thickness [mm].
    pub d: f64,
    /// Wall temperature label [K].
    pub t_w: Option<f64>,
}

impl SampleRecord {
    pub fn get(&self, f: Field) -> Option<f64> {
        Some(match f {
            Field::Z => self.z,
            Field::Tb => self.t_b,
            Field::Hb => self.h_b,
            Field::Pb => self.p_b,
            Field::Vb => self.v_b,
            Field::G => self.g,
            Field::Q => self.q,
            Field::R => self.r,
            Field::A => self.a,
            Field::Ar => self.ar,
            Field::D => self.d,
            Field::Tw => return self.t_w,
        })
    }

    fn inputs(&self) -> [f64; 11] {
        [
            self.z, self.t_b, self.h_b, self.p_b, self.v_b, self.g, self.q, self.r, self.a, self.ar, self.d,
        ]
    }

    /// Checks the schema invariants: finite values, `z >= 0`, `q >= 0`, the
    /// rest strictly positive.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for f in Field::ALL {
            let Some(v) = self.get(f) else { continue };
            let ok = match f {
                Field::Z | Field::Q => v >= 0.0,
                _ => v > 0.0,
            };
            if !(v.is_finite() && ok) {
                return Err(format!("invalid {} = {v}", f.name()));
            }
        }
        Ok(())
    }
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    External,
    CfdImport,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Oracle => "oracle",
            Provenance::External => "external",
            Provenance::CfdImport => "cfd-import",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "oracle" => Some(Provenance::Oracle),
            "external" => Some(Provenance::External),
            "cfd-import" => Some(Provenance::CfdImport),
            _ => None,
        }
    }
}

/// Whether the wall-temperature column must be present when loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    Training,
    Inference,
}

/// Ordered list of input columns fed to the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpec {
    names: Vec<String>,
    fields: Vec<Field>,
}

impl FeatureSpec {
    /// `[h_b, p_b, G, q, r, A, AR, d, z]`.
    pub const CANONICAL: [Field; 9] = [
        Field::Hb,
        Field::Pb,
        Field::G,
        Field::Q,
        Field::R,
        Field::A,
        Field::Ar,
        Field::D,
        Field::Z,
    ];

    pub fn canonical() -> Self {
        Self::from_fields(&Self::CANONICAL).expect("canonical spec is valid")
    }

    pub fn from_fields(fields: &[Field]) -> Result<Self> {
        Self::new(fields.iter().map(|f| f.name().to_string()).collect())
    }

    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Validation("feature list is empty".into()));
        }
        let mut fields = Vec::with_capacity(names.len());
        for n in &names {
            let f = Field::parse(n).ok_or_else(|| Error::Validation(format!("unknown feature `{n}`")))?;
            if f == Field::Tw {
                return Err(Error::Validation("the label T_w cannot be a feature".into()));
            }
            if fields.contains(&f) {
                return Err(Error::Validation(format!("duplicate feature `{n}`")));
            }
            fields.push(f);
        }
        let names = fields.iter().map(|f| f.name().to_string()).collect();
        Ok(FeatureSpec { names, fields })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        let f = Field::parse(name)?;
        self.fields.iter().position(|&g| g == f)
    }

    pub fn extract(&self, rec: &SampleRecord) -> Vec<f64> {
        self.fields
            .iter()
            .map(|&f| rec.get(f).expect("features never include the label"))
            .collect()
    }
}

impl Default for FeatureSpec {
    fn default() -> Self {
        Self::canonical()
    }
}

/// Column store of [`SampleRecord`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    inputs: [Vec<f64>; 11],
    labels: Option<Vec<f64>>,
    provenance: Provenance,
}

impl Dataset {
    pub fn new(provenance: Provenance, labelled: bool) -> Self {
        Dataset {
            inputs: Default::default(),
            labels: labelled.then(Vec::new),
            provenance,
        }
    }

    pub fn from_records(provenance: Provenance, records: &[SampleRecord]) -> Result<Self> {
        let labelled = records.first().is_none_or(|r| r.t_w.is_some());
        let mut ds = Self::new(provenance, labelled);
        for r in records {
            ds.push(*r)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, rec: SampleRecord) -> Result<()> {
        let row = self.len() + 1;
        rec.validate()
            .map_err(|m| Error::Validation(format!("row {row}: {m}")))?;
        match (&mut self.labels, rec.t_w) {
            (Some(l), Some(t)) => l.push(t),
            (None, None) => {}
            (Some(_), None) => return Err(Error::Validation(format!("row {row}: missing T_w label"))),
            (None, Some(_)) => {}
        }
        for (col, v) in self.inputs.iter_mut().zip(rec.inputs()) {
            col.push(v);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_labelled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn column(&self, f: Field) -> Option<&[f64]> {
        match f {
            Field::Tw => self.labels.as_deref(),
            _ => Some(&self.inputs[f.index()]),
        }
    }

    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }

    pub fn require_labels(&self) -> Result<&[f64]> {
        self.labels
            .as_deref()
            .ok_or_else(|| Error::Validation("dataset has no T_w labels".into()))
    }

    pub fn record(&self, i: usize) -> SampleRecord {
        let c = |f: Field| self.inputs[f.index()][i];
        SampleRecord {
            z: c(Field::Z),
            t_b: c(Field::Tb),
            h_b: c(Field::Hb),
            p_b: c(Field::Pb),
            v_b: c(Field::Vb),
            g: c(Field::G),
            q: c(Field::Q),
            r: c(Field::R),
            a: c(Field::A),
            ar: c(Field::Ar),
            d: c(Field::D),
            t_w: self.labels.as_ref().map(|l| l[i]),
        }
    }

    pub fn records(&self) -> impl Iterator<Item = SampleRecord> + '_ {
        (0..self.len()).map(|i| self.record(i))
    }

    /// Rows `indices` in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            inputs: std::array::from_fn(|c| indices.iter().map(|&i| self.inputs[c][i]).collect()),
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect()),
            provenance: self.provenance,
        }
    }

    /// Appends `other`; both must agree on whether labels are present.
    pub fn extend(&mut self, other: &Dataset) -> Result<()> {
        if self.is_labelled() != other.is_labelled() {
            return Err(Error::Validation("cannot mix labelled and unlabelled datasets".into()));
        }
        for (a, b) in self.inputs.iter_mut().zip(&other.inputs) {
            a.extend_from_slice(b);
        }
        if let (Some(a), Some(b)) = (&mut self.labels, &other.labels) {
            a.extend_from_slice(b);
        }
        Ok(())
    }

    /// Row-major feature matrix for `spec`.
    pub fn features(&self, spec: &FeatureSpec) -> Vec<f64> {
        let cols: Vec<&[f64]> = spec.fields().iter().map(|&f| self.inputs[f.index()].as_slice()).collect();
        let mut out = Vec::with_capacity(self.len() * cols.len());
        for i in 0..self.len() {
            out.extend(cols.iter().map(|c| c[i]));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("#provenance={}\n", self.provenance.as_str());
        let fields: Vec<Field> = if self.is_labelled() {
            Field::ALL.to_vec()
        } else {
            Field::INPUTS.to_vec()
        };
        out.push_str(&fields.iter().map(|f| f.header()).collect::<Vec<_>>().join(","));
        out.push('\n');
        for i in 0..self.len() {
            for (k, &f) in fields.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", fmt_f64(self.column(f).expect("present")[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str, mode: LabelMode) -> Result<Dataset> {
        let provenance = text
            .lines()
            .filter_map(|l| l.trim().strip_prefix("#provenance="))
            .next_back()
            .map(|p| Provenance::parse(p).ok_or_else(|| Error::Parse { line: 1, message: format!("unknown provenance `{p}`") }))
            .transpose()?
            .unwrap_or(Provenance::External);

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
            .clone();
        let header_line = header.position().map_or(1, |p| p.line() as usize);
        let mut slots: Vec<Option<usize>> = vec![None; Field::ALL.len()];
        for (col, name) in header.iter().enumerate() {
            let f = Field::parse(name).ok_or_else(|| Error::Parse {
                line: header_line,
                message: format!("unknown column `{name}`"),
            })?;
            if slots[f.index()].replace(col).is_some() {
                return Err(Error::Parse {
                    line: header_line,
                    message: format!("duplicate column `{name}`"),
                });
            }
        }
        if let Some(f) = Field::INPUTS.into_iter().find(|f| slots[f.index()].is_none()) {
            return Err(Error::Parse {
                line: header_line,
                message: format!("missing column `{}`", f.name()),
            });
        }
        let has_label = slots[Field::Tw.index()].is_some();
        if mode == LabelMode::Training && !has_label {
            return Err(Error::Validation("training data needs a T_w column".into()));
        }

        let mut ds = Dataset::new(provenance, has_label);
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let get = |f: Field| -> Result<Option<f64>> {
                match slots[f.index()] {
                    None => Ok(None),
                    Some(c) => {
                        let s = rec.get(c).unwrap_or("");
                        s.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                            line,
                            message: format!("column {}: not a number `{s}`", f.name()),
                        })
                    }
                }
            };
            let v = |f: Field| -> Result<f64> { Ok(get(f)?.expect("input columns checked")) };
            let record = SampleRecord {
                z: v(Field::Z)?,
                t_b: v(Field::Tb)?,
                h_b: v(Field::Hb)?,
                p_b: v(Field::Pb)?,
                v_b: v(Field::Vb)?,
                g: v(Field::G)?,
                q: v(Field::Q)?,
                r: v(Field::R)?,
                a: v(Field::A)?,
                ar: v(Field::Ar)?,
                d: v(Field::D)?,
                t_w: get(Field::Tw)?,
            };
            record
                .validate()
                .map_err(|m| Error::Validation(format!("line {line}: {m}")))?;
            ds.push(record)?;
        }
        Ok(ds)
    }
}

pub fn load_dataset(path: &Path, mode: LabelMode) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Dataset::from_csv(&text, mode)
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    atomic_write(path, ds.to_csv().as_bytes())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn record(i: usize) -> SampleRecord {
        let x = i as f64;
        SampleRecord {
            z: 2.0 * x,
            t_b: 150.0 + x,
            h_b: 3.0e5 + 1e3 * x,
            p_b: 8.0e6 - 1e3 * x,
            v_b: 50.0 + 0.1 * x,
            g: 15_000.0,
            q: 3.0e7,
            r: 2.5,
            a: 4.0,
            ar: 2.0,
            d: 1.0,
            t_w: Some(500.0 + 3.0 * x),
        }
    }

    #[test]
    fn csv_round_trip() {
        let recs: Vec<_> = (0..5).map(record).collect();
        let ds = Dataset::from_records(Provenance::Oracle, &recs).unwrap();
        let back = Dataset::from_csv(&ds.to_csv(), LabelMode::Training).unwrap();
        assert_eq!(back, ds);
        assert_eq!(back.provenance(), Provenance::Oracle);
    }

    #[test]
    fn negative_area_names_the_row() {
        let recs: Vec<_> = (0..3).map(record).collect();
        let ds = Dataset::from_records(Provenance::Oracle, &recs).unwrap();
        let csv = ds.to_csv();
        let mut lines: Vec<String> = csv.lines().map(String::from).collect();
        // line 4 of the file is the second data row; A is column 9
        let mut cells: Vec<&str> = lines[3].split(',').collect();
        cells[8] = "-4.0";
        lines[3] = cells.join(",");
        let err = Dataset::from_csv(&lines.join("\n"), LabelMode::Training).unwrap_err();
        match err {
            Error::Validation(m) => assert!(m.contains("line 4") && m.contains('A'), "{m}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn inference_mode_allows_missing_label() {
        let recs: Vec<_> = (0..3).map(|i| SampleRecord { t_w: None, ..record(i) }).collect();
        let ds = Dataset::from_records(Provenance::External, &recs).unwrap();
        let text = ds.to_csv();
        assert!(!text.contains("T_w"));
        let back = Dataset::from_csv(&text, LabelMode::Inference).unwrap();
        assert!(!back.is_labelled());
        assert_eq!(back.len(), 3);
        assert!(Dataset::from_csv(&text, LabelMode::Training).is_err());
    }

    #[test]
    fn bare_headers_accepted() {
        let text = "z,T_b,h_b,p_b,v_b,G,q,r,A,AR,d,T_w\n0,150,3e5,8e6,50,15000,3e7,2.5,4,2,1,500\n";
        let ds = Dataset::from_csv(text, LabelMode::Training).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.provenance(), Provenance::External);
    }

    #[test]
    fn feature_spec_rules() {
        let spec = FeatureSpec::canonical();
        assert_eq!(spec.names(), &["h_b", "p_b", "G", "q", "r", "A", "AR", "d", "z"]);
        assert!(FeatureSpec::new(vec!["T_w".into()]).is_err());
        assert!(FeatureSpec::new(vec!["q".into(), "q".into()]).is_err());
        assert!(FeatureSpec::new(vec!["nope".into()]).is_err());
        let r = record(1);
        assert_eq!(spec.extract(&r)[1], r.p_b);
    }

    #[test]
    fn features_are_row_major() {
        let recs: Vec<_> = (0..3).map(record).collect();
        let ds = Dataset::from_records(Provenance::Oracle, &recs).unwrap();
        let spec = FeatureSpec::from_fields(&[Field::Z, Field::Tb]).unwrap();
        assert_eq!(ds.features(&spec), vec![0.0, 150.0, 2.0, 151.0, 4.0, 152.0]);
        let sub = ds.subset(&[2, 0]);
        assert_eq!(sub.column(Field::Z).unwrap(), &[4.0, 0.0]);
    }
}
