use crate::error::{Error, Result};

/// A plot-ready CSV file held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: impl Into<String>, header: &[&'static str]) -> Self {
        CsvTable {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "{}: row width", self.name);
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Invalid(format!("{}: {e}", self.name));
        w.write_record(&self.header).map_err(err)?;
        for row in &self.rows {
            w.write_record(row).map_err(err)?;
        }
        w.into_inner().map_err(|e| Error::Invalid(format!("{}: {e}", self.name)))
    }
}

/// Shortest representation that parses back to the same value.
pub(crate) fn fmt_f(x: f64) -> String {
    format!("{x}")
}

/// Absent values are written as empty fields.
pub(crate) fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 0.0, 1.0, 123456.789] {
            assert_eq!(fmt_f(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn quotes_awkward_names() {
        let mut t = CsvTable::new("t.csv", &["user", "x"]);
        t.push(vec!["a,b".into(), "1".into()]);
        assert_eq!(String::from_utf8(t.to_bytes().unwrap()).unwrap(), "user,x\n\"a,b\",1\n");
    }
}
