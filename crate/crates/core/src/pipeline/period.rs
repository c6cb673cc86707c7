use crate::error::{Error, Result};

/// Parse an ISO-style year-quarter label ("1985Q1") into (year, quarter).
pub fn parse_period(label: &str) -> Result<(i32, u8)> {
    let bad = || Error::config(format!("period {label:?} is not of the form YYYYQn"));
    let (year_part, quarter_part) = label.split_once(['Q', 'q']).ok_or_else(bad)?;
    let year: i32 = year_part.parse().map_err(|_| bad())?;
    let quarter: u8 = quarter_part.parse().map_err(|_| bad())?;
    if !(1..=4).contains(&quarter) {
        return Err(bad());
    }
    Ok((year, quarter))
}

/// Format (year, quarter) as "1985Q1".
pub fn period_label(year: i32, quarter: u8) -> String {
    format!("{year}Q{quarter}")
}

/// The label of the quarter following `label`.
pub fn next_period(label: &str) -> Result<String> {
    let (year, quarter) = parse_period(label)?;
    Ok(if quarter == 4 {
        period_label(year + 1, 1)
    } else {
        period_label(year, quarter + 1)
    })
}

/// Check that labels form an ascending gap-free run of quarters.
pub fn check_contiguous(labels: &[String]) -> Result<()> {
    for pair in labels.windows(2) {
        let expect = next_period(&pair[0])?;
        if pair[1] != expect {
            return Err(Error::config(format!(
                "periods must be contiguous quarters: after {} expected {expect}, got {}",
                pair[0], pair[1]
            )));
        }
    }
    if let Some(last) = labels.last() {
        parse_period(last)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_period("1985Q1").unwrap(), (1985, 1));
        assert_eq!(parse_period("2020q4").unwrap(), (2020, 4));
        assert_eq!(period_label(1999, 3), "1999Q3");
    }

    #[test]
    fn malformed_labels_rejected() {
        for bad in ["1985", "1985Q5", "1985Q0", "Q1", "85-Q1", "1985Q", "1985QQ1"] {
            assert!(parse_period(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn year_boundary_rolls_over() {
        assert_eq!(next_period("1999Q4").unwrap(), "2000Q1");
        assert_eq!(next_period("1999Q2").unwrap(), "1999Q3");
    }

    #[test]
    fn contiguity_detects_gaps() {
        let good: Vec<String> = ["1999Q3", "1999Q4", "2000Q1"].map(String::from).into();
        assert!(check_contiguous(&good).is_ok());
        let gap: Vec<String> = ["1999Q3", "2000Q1"].map(String::from).into();
        assert!(check_contiguous(&gap).is_err());
        let reversed: Vec<String> = ["2000Q1", "1999Q4"].map(String::from).into();
        assert!(check_contiguous(&reversed).is_err());
    }
}
