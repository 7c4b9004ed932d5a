use std::fmt;
use std::str::FromStr;

/// Inclusive `start:stop:step` range, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [single] => vec![number(single)?],
            [start, stop, step] => {
                let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
                if step <= 0.0 {
                    return Err(format!("step {step} must be positive"));
                }
                if stop < start {
                    return Err(format!("stop {stop} is below start {start}"));
                }
                // Tolerate rounding in (stop − start)/step.
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if count > 1_000_000 {
                    return Err(format!("{count} grid points is too many"));
                }
                (0..count).map(|i| start + step * i as f64).collect()
            }
            _ => return Err(format!("{s:?} is neither a number nor start:stop:step")),
        };
        Ok(Grid {
            text: s.to_string(),
            values,
        })
    }
}
