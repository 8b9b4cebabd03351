//! Trace CSV files: header `k,N_k,alpha_k,zeta_k,theta_k,fev_cum,f_saa,f_full`,
//! one row per iteration. `f_full` is empty on rows outside the diagnostic
//! stride. Floats use the shortest representation that reads back exactly.

use std::io::{Read, Write};
use std::path::Path;

use ansps::TraceRow;

use crate::error::CliError;

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(ansps::trace::TRACE_HEADER)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != ansps::trace::TRACE_HEADER {
        return Err(CliError::Io(format!("unexpected trace header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(CliError::from))
        .collect()
}

pub fn write_trace_file(path: &Path, rows: &[TraceRow]) -> Result<(), CliError> {
    let f = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_trace(rows, std::io::BufWriter::new(f))
}

pub fn read_trace_file(path: &Path) -> Result<Vec<TraceRow>, CliError> {
    let f = std::fs::File::open(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    read_trace(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_empty_f_full() {
        let rows = vec![
            TraceRow {
                k: 0,
                n_k: 3,
                alpha_k: 1.0,
                zeta_k: 1.0,
                theta_k: 0.25,
                fev_cum: 3,
                f_saa: 0.9,
                f_full: Some(0.95),
            },
            TraceRow {
                k: 1,
                n_k: 4,
                alpha_k: 0.505,
                zeta_k: 1e-4,
                theta_k: 0.0,
                fev_cum: 17,
                f_saa: 0.1 + 0.2,
                f_full: None,
            },
        ];
        let mut buf = Vec::new();
        write_trace(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,N_k,alpha_k,zeta_k,theta_k,fev_cum,f_saa,f_full"));
        assert_eq!(lines.next(), Some("0,3,1.0,1.0,0.25,3,0.9,0.95"));
        assert!(lines.next().unwrap().ends_with(','));
        assert_eq!(read_trace(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_trace("a,b\n1,2\n".as_bytes()).is_err());
    }
}
