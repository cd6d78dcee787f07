//! Energy-trace CSV, one row per accepted step.

use std::io::{self, Write};

use crate::diagnostics::{director_length_stats, h2_diagnostic, EnergyLedger};
use crate::error::{Error, Result};
use crate::stepper::StepState;

pub const TRACE_HEADER: &str = "step,time,E_total,E_elastic,E_well,E_kinetic,D_visc,D_friction,D_eps,\
J_grad,J_d,J_u,slack,picard_iters,picard_residual,min_len,max_len,div_u_max,h2_d";

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub ledger: EnergyLedger,
    pub min_len: f64,
    pub max_len: f64,
    pub div_u_max: f64,
    pub h2_d: f64,
}

impl TraceRow {
    pub fn new(ledger: EnergyLedger, state: &StepState) -> Self {
        let len = director_length_stats(&state.d_field());
        TraceRow {
            ledger,
            min_len: len.min,
            max_len: len.max,
            div_u_max: state.u.max_divergence(),
            h2_d: h2_diagnostic(&state.d),
        }
    }

    /// Floats use Rust's shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let l = &self.ledger;
        let floats = [
            l.time,
            l.energy.total,
            l.energy.elastic,
            l.energy.well,
            l.energy.kinetic,
            l.d_visc,
            l.d_friction,
            l.d_eps,
            l.j_grad,
            l.j_d,
            l.j_u,
            l.slack,
        ];
        let mut out = l.step.to_string();
        for v in floats {
            out.push_str(&format!(",{v:?}"));
        }
        out.push_str(&format!(",{}", l.picard_iters));
        for v in [l.picard_residual, self.min_len, self.max_len, self.div_u_max, self.h2_d] {
            out.push_str(&format!(",{v:?}"));
        }
        out
    }
}

/// Streams rows, flushing after each so partial runs leave a valid file.
pub struct TraceWriter<W: Write> {
    inner: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(mut inner: W) -> io::Result<Self> {
        writeln!(inner, "{TRACE_HEADER}")?;
        inner.flush()?;
        Ok(TraceWriter { inner })
    }

    pub fn write_row(&mut self, row: &TraceRow) -> io::Result<()> {
        writeln!(self.inner, "{}", row.to_csv())?;
        self.inner.flush()
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

/// Parses a trace back into numeric rows, checking the header.
pub fn parse_trace(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines();
    if lines.next() != Some(TRACE_HEADER) {
        return Err(Error::Format("trace header mismatch".into()));
    }
    let cols = TRACE_HEADER.split(',').count();
    lines
        .map(|line| {
            let row: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
            match row {
                Ok(r) if r.len() == cols => Ok(r),
                _ => Err(Error::Format(format!("bad trace row {line:?}"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Dealias, GridSpec};

    #[test]
    fn rows_round_trip() {
        let g = GridSpec::new(2, 8, Dealias::None).unwrap();
        let s = StepState::uniform(g, &[1.0, 0.0]).unwrap();
        let mut ledger = EnergyLedger {
            step: 4,
            time: 0.1 + 0.2,
            slack: -1.5e-300,
            picard_iters: 17,
            ..Default::default()
        };
        ledger.energy.total = 1.0 / 3.0;
        let row = TraceRow::new(ledger, &s);
        let mut w = TraceWriter::new(Vec::new()).unwrap();
        w.write_row(&row).unwrap();
        let text = String::from_utf8(w.into_inner()).unwrap();
        let rows = parse_trace(&text).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0][0], 4.0);
        assert_eq!(rows[0][1].to_bits(), (0.1f64 + 0.2).to_bits());
        assert_eq!(rows[0][2].to_bits(), (1.0f64 / 3.0).to_bits());
        assert_eq!(rows[0][12], -1.5e-300);
        assert_eq!(rows[0][13], 17.0);
        assert_eq!((rows[0][15], rows[0][16]), (1.0, 1.0));
        assert!(parse_trace("nope\n").is_err());
    }
}
