//! CSV emission: versioned schema line, mandatory header, and fixed
//! 9-significant-digit scientific notation so reruns are byte-identical.

use std::io::Write;

use crate::CliError;

/// Formats a value with 9 significant digits in scientific notation.
pub fn sig9(value: f64) -> String {
    format!("{value:.8e}")
}

/// A CSV table bound to an output stream.
pub struct Table<'a> {
    out: &'a mut dyn Write,
}

impl<'a> Table<'a> {
    /// Writes the schema comment line and the header row.
    pub fn new(
        out: &'a mut dyn Write,
        schema: &str,
        columns: &[&str],
    ) -> Result<Self, CliError> {
        writeln!(out, "# schema: {schema}")?;
        writeln!(out, "{}", columns.join(","))?;
        Ok(Table { out })
    }

    /// Writes one row; fields are already formatted.
    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }
}
