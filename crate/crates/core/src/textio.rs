//! Small helpers shared by the text serializers.
//!
//! Reals are printed with 17 significant digits so that every `f64`
//! round-trips exactly through its decimal form.

use crate::error::{Error, Result};

pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn parse_real(tok: &str, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
}

pub(crate) fn parse_usize(tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
}

pub(crate) fn parse_u64(tok: &str, what: &str) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
}
