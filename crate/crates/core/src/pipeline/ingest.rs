use std::collections::HashMap;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::WeightMatrix;
use crate::pipeline::gini::SurveyRecord;
use crate::pipeline::period::{check_contiguous, parse_period};
use crate::pipeline::spatial::{Centroids, DistanceConvention};
use crate::pipeline::transforms::RawPanel;

/// Map expected header names to their column positions. Missing columns are
/// always an error; unexpected ones only when `permissive` is false.
fn header_positions(
    headers: &csv::StringRecord,
    expected: &[&str],
    permissive: bool,
    path: &Path,
) -> Result<Vec<usize>> {
    let mut positions = Vec::with_capacity(expected.len());
    for &name in expected {
        match headers.iter().position(|h| h == name) {
            Some(pos) => positions.push(pos),
            None => {
                return Err(Error::config(format!(
                    "{}: missing required column {name:?}",
                    path.display()
                )))
            }
        }
    }
    if !permissive {
        for h in headers.iter() {
            if !expected.contains(&h) {
                return Err(Error::config(format!(
                    "{}: unknown column {h:?} (pass the permissive flag to ignore)",
                    path.display()
                )));
            }
        }
    }
    Ok(positions)
}

fn parse_value(field: &str, what: &str, line: usize, path: &Path) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| {
        Error::config(format!(
            "{} line {line}: cannot parse {what} from {field:?}",
            path.display()
        ))
    })?;
    if !v.is_finite() {
        return Err(Error::config(format!(
            "{} line {line}: {what} is not finite",
            path.display()
        )));
    }
    Ok(v)
}

/// Read a long-format panel CSV (`region,variable,period,value`). Rows with
/// an empty region field are the national series. Regions, variables, and
/// periods are ordered by first appearance / calendar; every combination
/// must appear exactly once.
pub fn read_panel_csv(path: &Path, permissive: bool) -> Result<RawPanel> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?
        .clone();
    let pos = header_positions(&headers, &["region", "variable", "period", "value"], permissive, path)?;

    let mut region_names: Vec<String> = Vec::new();
    let mut region_vars: Vec<String> = Vec::new();
    let mut national_vars: Vec<String> = Vec::new();
    let mut periods: Vec<String> = Vec::new();
    let mut cells: HashMap<(String, String, String), f64> = HashMap::new();

    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2; // header occupies line 1
        let row = row.map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
        let region = row.get(pos[0]).unwrap_or("").trim().to_string();
        let variable = row.get(pos[1]).unwrap_or("").trim().to_string();
        let period = row.get(pos[2]).unwrap_or("").trim().to_string();
        let value = parse_value(row.get(pos[3]).unwrap_or(""), "value", line, path)?;
        if variable.is_empty() {
            return Err(Error::config(format!(
                "{} line {line}: empty variable name",
                path.display()
            )));
        }
        parse_period(&period)
            .map_err(|e| Error::config(format!("{} line {line}: {e}", path.display())))?;
        if region.is_empty() {
            if !national_vars.contains(&variable) {
                national_vars.push(variable.clone());
            }
        } else {
            if !region_names.contains(&region) {
                region_names.push(region.clone());
            }
            if !region_vars.contains(&variable) {
                region_vars.push(variable.clone());
            }
        }
        if !periods.contains(&period) {
            periods.push(period.clone());
        }
        if cells.insert((region.clone(), variable.clone(), period.clone()), value).is_some() {
            return Err(Error::config(format!(
                "{} line {line}: duplicate cell ({region:?}, {variable:?}, {period})",
                path.display()
            )));
        }
    }
    if region_names.is_empty() {
        return Err(Error::config(format!(
            "{}: no region rows found",
            path.display()
        )));
    }
    periods.sort_by_key(|p| parse_period(p).expect("validated above"));
    check_contiguous(&periods)?;

    let t = periods.len();
    let take = |region: &str, variable: &str, period: &str| -> Result<f64> {
        cells
            .get(&(region.to_string(), variable.to_string(), period.to_string()))
            .copied()
            .ok_or_else(|| {
                let who = if region.is_empty() { "national" } else { region };
                Error::config(format!(
                    "{}: missing observation for ({who}, {variable}, {period})",
                    path.display()
                ))
            })
    };
    let mut region_series = Vec::with_capacity(region_names.len());
    for name in &region_names {
        let mut m = DMatrix::zeros(t, region_vars.len());
        for (c, var) in region_vars.iter().enumerate() {
            for (r, period) in periods.iter().enumerate() {
                m[(r, c)] = take(name, var, period)?;
            }
        }
        region_series.push(m);
    }
    let mut national_series = DMatrix::zeros(t, national_vars.len());
    for (c, var) in national_vars.iter().enumerate() {
        for (r, period) in periods.iter().enumerate() {
            national_series[(r, c)] = take("", var, period)?;
        }
    }

    Ok(RawPanel {
        region_series,
        national_series,
        region_names,
        region_var_names: region_vars,
        national_var_names: national_vars,
        periods,
    })
}

/// Write a panel in the long format accepted by [`read_panel_csv`].
pub fn write_panel_csv(path: &Path, panel: &RawPanel) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    writer
        .write_record(["region", "variable", "period", "value"])
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let mut write_row = |region: &str, variable: &str, period: &str, value: f64| -> Result<()> {
        writer
            .write_record([region, variable, period, &format!("{value:.17e}")])
            .map_err(|e| Error::io(format!("{}: {e}", path.display())))
    };
    for (i, name) in panel.region_names.iter().enumerate() {
        for (c, var) in panel.region_var_names.iter().enumerate() {
            for (r, period) in panel.periods.iter().enumerate() {
                write_row(name, var, period, panel.region_series[i][(r, c)])?;
            }
        }
    }
    for (c, var) in panel.national_var_names.iter().enumerate() {
        for (r, period) in panel.periods.iter().enumerate() {
            write_row("", var, period, panel.national_series[(r, c)])?;
        }
    }
    Ok(())
}

/// Read survey microdata (`income,size,weight,year`).
pub fn read_survey_csv(path: &Path, permissive: bool) -> Result<Vec<SurveyRecord>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?
        .clone();
    let pos = header_positions(&headers, &["income", "size", "weight", "year"], permissive, path)?;
    let mut out = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
        let income = parse_value(row.get(pos[0]).unwrap_or(""), "income", line, path)?;
        let size: u32 = row
            .get(pos[1])
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| {
                Error::config(format!(
                    "{} line {line}: household size must be a non-negative integer",
                    path.display()
                ))
            })?;
        let weight = parse_value(row.get(pos[2]).unwrap_or(""), "weight", line, path)?;
        let year = row.get(pos[3]).unwrap_or("").trim().to_string();
        if year.is_empty() {
            return Err(Error::config(format!(
                "{} line {line}: empty year",
                path.display()
            )));
        }
        out.push(SurveyRecord {
            income,
            household_size: size,
            weight,
            period: year,
        });
    }
    if out.is_empty() {
        return Err(Error::config(format!(
            "{}: no survey records",
            path.display()
        )));
    }
    Ok(out)
}

/// Read centroids (`region,x,y,convention`); the convention column must be
/// uniform across rows ("planar" or "spherical").
pub fn read_centroid_csv(path: &Path, permissive: bool) -> Result<Centroids> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?
        .clone();
    let pos = header_positions(&headers, &["region", "x", "y", "convention"], permissive, path)?;
    let mut names = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut convention: Option<DistanceConvention> = None;
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
        let name = row.get(pos[0]).unwrap_or("").trim().to_string();
        if name.is_empty() {
            return Err(Error::config(format!(
                "{} line {line}: empty region name",
                path.display()
            )));
        }
        if names.contains(&name) {
            return Err(Error::config(format!(
                "{} line {line}: duplicate region {name:?}",
                path.display()
            )));
        }
        xs.push(parse_value(row.get(pos[1]).unwrap_or(""), "x", line, path)?);
        ys.push(parse_value(row.get(pos[2]).unwrap_or(""), "y", line, path)?);
        let conv = match row.get(pos[3]).unwrap_or("").trim() {
            "planar" => DistanceConvention::Planar,
            "spherical" => DistanceConvention::Spherical,
            other => {
                return Err(Error::config(format!(
                    "{} line {line}: convention must be \"planar\" or \"spherical\", got {other:?}",
                    path.display()
                )))
            }
        };
        if let Some(prev) = convention {
            if prev != conv {
                return Err(Error::config(format!(
                    "{} line {line}: mixed coordinate conventions",
                    path.display()
                )));
            }
        }
        convention = Some(conv);
        names.push(name);
    }
    let convention = convention
        .ok_or_else(|| Error::config(format!("{}: no centroid rows", path.display())))?;
    Centroids::new(names, xs, ys, convention)
}

/// Write centroids in the format accepted by [`read_centroid_csv`].
pub fn write_centroid_csv(path: &Path, centroids: &Centroids) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    writer
        .write_record(["region", "x", "y", "convention"])
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let conv = match centroids.convention {
        DistanceConvention::Planar => "planar",
        DistanceConvention::Spherical => "spherical",
    };
    for i in 0..centroids.len() {
        writer
            .write_record([
                centroids.names[i].as_str(),
                &format!("{:.17e}", centroids.x[i]),
                &format!("{:.17e}", centroids.y[i]),
                conv,
            ])
            .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Read a square weight matrix: header `region,<name>,...`, one row per
/// region. Returns the names in file order with the validated matrix.
pub fn read_weights_csv(path: &Path) -> Result<(Vec<String>, WeightMatrix)> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?
        .clone();
    if headers.get(0) != Some("region") {
        return Err(Error::config(format!(
            "{}: first column must be \"region\"",
            path.display()
        )));
    }
    let names: Vec<String> = headers.iter().skip(1).map(String::from).collect();
    let n = names.len();
    if n == 0 {
        return Err(Error::config(format!("{}: no region columns", path.display())));
    }
    let mut matrix = DMatrix::zeros(n, n);
    let mut row_names = Vec::with_capacity(n);
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
        if row.len() != n + 1 {
            return Err(Error::config(format!(
                "{} line {line}: expected {} fields, got {}",
                path.display(),
                n + 1,
                row.len()
            )));
        }
        if idx >= n {
            return Err(Error::config(format!(
                "{}: more rows than region columns",
                path.display()
            )));
        }
        row_names.push(row.get(0).unwrap_or("").trim().to_string());
        for j in 0..n {
            matrix[(idx, j)] =
                parse_value(row.get(j + 1).unwrap_or(""), "weight", line, path)?;
        }
    }
    if row_names != names {
        return Err(Error::config(format!(
            "{}: row order does not match column order",
            path.display()
        )));
    }
    Ok((names, WeightMatrix::new(matrix)?))
}

/// Write a weight matrix in the format accepted by [`read_weights_csv`].
pub fn write_weights_csv(path: &Path, names: &[String], weights: &WeightMatrix) -> Result<()> {
    let n = weights.regions();
    if names.len() != n {
        return Err(Error::config(format!(
            "{} names for a {n}-region weight matrix",
            names.len()
        )));
    }
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    let mut header = vec!["region".to_string()];
    header.extend(names.iter().cloned());
    writer
        .write_record(&header)
        .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    for i in 0..n {
        let mut record = vec![names[i].clone()];
        for j in 0..n {
            record.push(format!("{:.17e}", weights.get(i, j)));
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;
    use tempfile::TempDir;

    fn write_file(dir: &TempDir, name: &str, contents: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn panel_round_trip() {
        let dir = TempDir::new().unwrap();
        let panel = RawPanel {
            region_series: vec![
                DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
                DMatrix::from_row_slice(3, 2, &[-1.0, 0.5, 0.25, 9.0, 2.0, 7.0]),
            ],
            national_series: DMatrix::from_row_slice(3, 1, &[0.1, 0.2, 0.3]),
            region_names: vec!["east".into(), "west".into()],
            region_var_names: vec!["inequality".into(), "unemployment".into()],
            national_var_names: vec!["uncertainty".into()],
            periods: vec!["1999Q4".into(), "2000Q1".into(), "2000Q2".into()],
        };
        let path = dir.path().join("panel.csv");
        write_panel_csv(&path, &panel).unwrap();
        let back = read_panel_csv(&path, false).unwrap();
        assert_eq!(back, panel);
    }

    #[test]
    fn unknown_panel_column_rejected_unless_permissive() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "panel.csv",
            "region,variable,period,value,footnote\na,y,2000Q1,1.0,x\na,y,2000Q2,2.0,x\n",
        );
        let err = read_panel_csv(&path, false).unwrap_err();
        assert!(err.to_string().contains("footnote"), "{err}");
        let panel = read_panel_csv(&path, true).unwrap();
        assert_eq!(panel.region_names, vec!["a"]);
        assert_eq!(panel.national_var_names.len(), 0);
        assert_eq!(panel.region_series[0][(1, 0)], 2.0);
    }

    #[test]
    fn missing_cell_and_gap_detected() {
        let dir = TempDir::new().unwrap();
        let missing = write_file(
            &dir,
            "m.csv",
            "region,variable,period,value\na,y,2000Q1,1.0\na,y,2000Q2,2.0\nb,y,2000Q1,3.0\n",
        );
        let err = read_panel_csv(&missing, false).unwrap_err();
        assert!(err.to_string().contains("missing observation"), "{err}");

        let gap = write_file(
            &dir,
            "g.csv",
            "region,variable,period,value\na,y,2000Q1,1.0\na,y,2000Q3,2.0\n",
        );
        let err = read_panel_csv(&gap, false).unwrap_err();
        assert!(err.to_string().contains("contiguous"), "{err}");

        let dup = write_file(
            &dir,
            "d.csv",
            "region,variable,period,value\na,y,2000Q1,1.0\na,y,2000Q1,2.0\n",
        );
        let err = read_panel_csv(&dup, false).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn survey_reader_parses_records() {
        let dir = TempDir::new().unwrap();
        let path = write_file(
            &dir,
            "survey.csv",
            "income,size,weight,year\n1000,4,1.5,2000\n-20,1,2.0,2001\n",
        );
        let records = read_survey_csv(&path, false).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].income, 1000.0);
        assert_eq!(records[0].household_size, 4);
        assert_eq!(records[1].period, "2001");
    }

    #[test]
    fn centroid_round_trip_and_validation() {
        let dir = TempDir::new().unwrap();
        let c = Centroids::new(
            vec!["a".into(), "b".into()],
            vec![1.0, 2.0],
            vec![3.0, 4.0],
            DistanceConvention::Planar,
        )
        .unwrap();
        let path = dir.path().join("centroids.csv");
        write_centroid_csv(&path, &c).unwrap();
        assert_eq!(read_centroid_csv(&path, false).unwrap(), c);

        let mixed = write_file(
            &dir,
            "mixed.csv",
            "region,x,y,convention\na,0,0,planar\nb,1,1,spherical\n",
        );
        let err = read_centroid_csv(&mixed, false).unwrap_err();
        assert!(err.to_string().contains("mixed"), "{err}");
    }

    #[test]
    fn weights_round_trip_and_order_check() {
        let dir = TempDir::new().unwrap();
        let w = WeightMatrix::uniform(3).unwrap();
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let path = dir.path().join("weights.csv");
        write_weights_csv(&path, &names, &w).unwrap();
        let (back_names, back) = read_weights_csv(&path).unwrap();
        assert_eq!(back_names, names);
        assert_eq!(back.as_matrix(), w.as_matrix());

        let scrambled = write_file(
            &dir,
            "s.csv",
            "region,a,b\nb,0,1\na,1,0\n",
        );
        let err = read_weights_csv(&scrambled).unwrap_err();
        assert!(err.to_string().contains("row order"), "{err}");
    }
}
