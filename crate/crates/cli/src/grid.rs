//! `a:b:n` grids; endpoints accept `pi` multiples such as `pi/4`, `2pi`, `3*pi/2`.

use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl Grid {
    pub fn point(x: f64) -> Self {
        Self { start: x, end: x, n: 1 }
    }

    /// `n` evenly spaced points including both endpoints.
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.start + step * k as f64).collect()
    }
}

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse angle `{s}`");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("grid `{s}` must have the form start:end:count"));
        };
        let n: usize = n.trim().parse().map_err(|_| format!("grid count `{n}` is not a positive integer"))?;
        if n == 0 {
            return Err("grid must contain at least one point".into());
        }
        Ok(Self {
            start: parse_angle(a)?,
            end: parse_angle(b)?,
            n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("3*pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("1/0").is_err());
    }

    #[test]
    fn grids() {
        let g: Grid = "0:pi:5".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.0);
        assert!((p[4] - PI).abs() < 1e-15);
        assert_eq!("0.3:9:1".parse::<Grid>().unwrap().points(), vec![0.3]);
        assert!("0:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
    }
}
