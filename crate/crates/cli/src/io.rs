use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use momentype::model::{Family, SampleMatrix};

use crate::Fail;

/// `%.17g`: shortest fixed or scientific form with 17 significant digits.
pub fn g17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn open_input(path: &Path) -> Result<Box<dyn Read>, Fail> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin()));
    }
    File::open(path)
        .map(|f| Box::new(f) as Box<dyn Read>)
        .map_err(|e| Fail::input(format!("cannot read {}: {e}", path.display())))
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Fail> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdout().lock())),
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Fail::input(format!("cannot write {}: {e}", p.display()))),
    }
}

/// Reads a sample with header `x1..xk`. Rows are numbered from 1 after
/// the header; columns from 1.
pub fn read_sample(reader: impl Read, family: Family, renormalize: bool) -> Result<SampleMatrix, Fail> {
    let mut csv = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| Fail::input(format!("malformed header: {e}")))?.clone();
    let k = header.len();
    for (j, name) in header.iter().enumerate() {
        if name != format!("x{}", j + 1) {
            return Err(Fail::input(format!("header column {} is '{name}', expected 'x{}'", j + 1, j + 1)));
        }
    }
    if k == 0 {
        return Err(Fail::input("header has no columns".into()));
    }
    let mut data = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Fail::input(format!("row {row}: {e}")))?;
        if record.len() != k {
            return Err(Fail::input(format!("row {row}: {} columns, expected {k}", record.len())));
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Fail::input(format!("row {row}, column {}: '{field}' is not a number", j + 1)))?;
            data.push(v);
        }
    }
    if data.is_empty() {
        return Err(Fail::input("no observations".into()));
    }
    let sample = match (family, renormalize) {
        (Family::Dirichlet, true) => SampleMatrix::dirichlet_renormalized(k, data),
        (Family::MGamma, true) => return Err(Fail::input("--renormalize applies to Dirichlet samples only".into())),
        _ => SampleMatrix::new(family, k, data),
    };
    sample.map_err(Fail::from)
}

pub fn write_sample(out: impl Write, sample: &SampleMatrix) -> Result<(), Fail> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = (1..=sample.k()).map(|j| format!("x{j}")).collect();
    w.write_record(&header).map_err(Fail::io)?;
    for row in sample.rows() {
        w.write_record(row.iter().map(|&v| g17(v))).map_err(Fail::io)?;
    }
    w.flush().map_err(|e| Fail::io(e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(g17(1.5), "1.5");
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(g17(f64::NAN), "NaN");
        for x in [0.1, 1.0 / 3.0, 123456.789, 6.02e23, 1e-300, f64::MAX] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn header_and_fields_checked() {
        let ok = read_sample("x1,x2\n0.25,0.75\n".as_bytes(), Family::Dirichlet, false).unwrap();
        assert_eq!((ok.n(), ok.k()), (1, 2));
        let e = read_sample("a,b\n0.25,0.75\n".as_bytes(), Family::Dirichlet, false).unwrap_err();
        assert!(e.message.contains("header"));
        let e = read_sample("x1,x2\n0.25,0.75\n0.5,oops\n".as_bytes(), Family::Dirichlet, false).unwrap_err();
        assert!(e.message.contains("row 2, column 2"), "{}", e.message);
        let e = read_sample("x1,x2\n0.5,1.0\n".as_bytes(), Family::Dirichlet, false).unwrap_err();
        assert!(e.message.contains("row 1"));
        let r = read_sample("x1,x2\n0.3,0.7000001\n".as_bytes(), Family::Dirichlet, true).unwrap();
        assert!((r.row(0).iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
