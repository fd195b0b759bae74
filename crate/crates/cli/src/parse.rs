use num_complex::Complex;

/// Parses `a`, `bi`, `a+bi`, `a-bi` or the polar form `r@phi` (phi in radians).
pub fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((r, phi)) = t.split_once('@') {
        let r: f64 = r.parse().map_err(|_| format!("bad modulus in '{s}'"))?;
        let phi: f64 = phi.parse().map_err(|_| format!("bad angle in '{s}'"))?;
        return Ok(Complex::from_polar(r, phi));
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| Complex::new(re, 0.0)).map_err(|_| format!("cannot parse '{s}'"));
    };
    // The imaginary part starts at the last sign that is not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| format!("bad real part in '{s}'"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in '{s}'"))?;
    Ok(Complex::new(re, im))
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex<f64>>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

/// `t_max,t_steps,eta_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub t_max: f64,
    pub t_steps: usize,
    pub eta_steps: usize,
}

pub fn parse_grid(s: &str) -> Result<GridArg, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [t_max, t_steps, eta_steps] = parts.as_slice() else {
        return Err(format!("grid must be t_max,t_steps,eta_steps (got '{s}')"));
    };
    Ok(GridArg {
        t_max: t_max.parse().map_err(|_| format!("bad t_max '{t_max}'"))?,
        t_steps: t_steps.parse().map_err(|_| format!("bad t_steps '{t_steps}'"))?,
        eta_steps: eta_steps.parse().map_err(|_| format!("bad eta_steps '{eta_steps}'"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.2+0.1i").unwrap(), c(0.2, 0.1));
        assert_eq!(parse_complex("0.2-0.1i").unwrap(), c(0.2, -0.1));
        assert_eq!(parse_complex("-1e-3+2e-2i").unwrap(), c(-1e-3, 2e-2));
        assert_eq!(parse_complex("1e-3-2E+2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(parse_complex("0.1i").unwrap(), c(0.0, 0.1));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex(" 2 - 3i ").unwrap(), c(2.0, -3.0));
        let p = parse_complex("0.1@1.5707963267948966").unwrap();
        assert!((p - c(0.0, 0.1)).norm() < 1e-17);
    }

    #[test]
    fn complex_errors() {
        for bad in ["", "abc", "1+2j", "1@", "i+1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists_and_grids() {
        assert_eq!(parse_complex_list("0.05,0.1,0.2").unwrap().len(), 3);
        let g = parse_grid("30,6000,60").unwrap();
        assert_eq!(g, GridArg { t_max: 30.0, t_steps: 6000, eta_steps: 60 });
        assert!(parse_grid("30,6000").is_err());
    }
}
