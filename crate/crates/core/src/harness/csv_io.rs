//! Trajectory CSV with header `k,x1..xn,u1..um`.
//!
//! Each row holds the state at step `k` and the input applied at `k`. The
//! input cells of the final row may be empty when the run ends on a state.

use std::path::Path;

use log::warn;
use nalgebra::DVector;

use super::plant::Trajectory;
use crate::error::{Error, Result};

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let header = rdr.headers()?.clone();
    let (nx, nu) = parse_header(&header)?;

    let mut traj = Trajectory::default();
    let mut ended = false;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if ended {
            return Err(Error::Parse(format!("line {line}: row after a row without inputs")));
        }
        if rec.len() != 1 + nx + nu {
            return Err(Error::Parse(format!(
                "line {line}: {} fields, header has {}",
                rec.len(),
                1 + nx + nu
            )));
        }
        let num = |j: usize| -> Result<f64> {
            rec[j]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {line}, column {}: {e}", &header[j])))
        };
        let k = rec[0]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("line {line}: step index: {e}")))?;
        if k != traj.states.len() {
            return Err(Error::Parse(format!("line {line}: expected step {}, got {k}", traj.states.len())));
        }
        let x = (1..=nx).map(num).collect::<Result<Vec<_>>>()?;
        traj.states.push(DVector::from_vec(x));
        if nu > 0 && (1 + nx..1 + nx + nu).all(|j| rec[j].is_empty()) {
            ended = true;
            continue;
        }
        let u = (1 + nx..1 + nx + nu).map(num).collect::<Result<Vec<_>>>()?;
        traj.inputs.push(DVector::from_vec(u));
    }
    if traj.states.is_empty() {
        warn!("{} has no data rows", path.display());
    }
    Ok(traj)
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let nx = traj.states.first().map_or(0, |x| x.len());
    let nu = traj.inputs.first().map_or(0, |u| u.len());
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["k".to_string()];
    header.extend((1..=nx).map(|i| format!("x{i}")));
    header.extend((1..=nu).map(|i| format!("u{i}")));
    w.write_record(&header)?;
    for (k, x) in traj.states.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(x.iter().map(|v| format!("{v:e}")));
        match traj.inputs.get(k) {
            Some(u) => row.extend(u.iter().map(|v| format!("{v:e}"))),
            None => row.extend(std::iter::repeat_n(String::new(), nu)),
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_header(h: &csv::StringRecord) -> Result<(usize, usize)> {
    if h.get(0) != Some("k") {
        return Err(Error::Parse("line 1: first column must be `k`".into()));
    }
    let (mut nx, mut nu) = (0, 0);
    for (j, name) in h.iter().enumerate().skip(1) {
        let expected_x = format!("x{}", nx + 1);
        let expected_u = format!("u{}", nu + 1);
        if nu == 0 && name == expected_x {
            nx += 1;
        } else if name == expected_u {
            nu += 1;
        } else {
            return Err(Error::Parse(format!("line 1, column {}: unexpected name `{name}`", j + 1)));
        }
    }
    if nx == 0 {
        return Err(Error::Parse("line 1: no state columns".into()));
    }
    Ok((nx, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn minimal_file() {
        let f = write("k,x1,x2,u1\n0,1,2,0.5\n1,1.5,2,0.5\n2,2,2,0.5\n");
        let t = read_trajectory(f.path()).unwrap();
        assert_eq!(t.states.len(), 3);
        assert_eq!(t.inputs.len(), 3);
        assert_eq!(t.states[1], dvector![1.5, 2.0]);
    }

    #[test]
    fn header_only() {
        let f = write("k,x1,u1\n");
        let t = read_trajectory(f.path()).unwrap();
        assert!(t.states.is_empty());
    }

    #[test]
    fn malformed_row_reports_line() {
        let f = write("k,x1,u1\n0,1,2\n1,abc,2\n");
        let err = read_trajectory(f.path()).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let f = write("k,x1,u1\n0,1,2\n1,2\n");
        assert!(read_trajectory(f.path()).is_err());
    }

    #[test]
    fn round_trip() {
        let t = Trajectory {
            states: vec![dvector![0.1, -3.0], dvector![1.0 / 3.0, 2e-17], dvector![5.0, 6.0]],
            inputs: vec![dvector![0.7], dvector![-1e10]],
            ..Default::default()
        };
        let f = tempfile::NamedTempFile::new().unwrap();
        write_trajectory(f.path(), &t).unwrap();
        let back = read_trajectory(f.path()).unwrap();
        assert_eq!(back.states, t.states);
        assert_eq!(back.inputs, t.inputs);
    }
}
