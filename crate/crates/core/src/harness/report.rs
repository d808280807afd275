//! Report types and their byte-stable JSON encoding.
//!
//! Keys appear in struct declaration order and every float is written with
//! 17 significant digits in scientific notation, e.g. `1.0000000000000000e-12`.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Max and root-mean-square of a non-negative quantity over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NormStats {
    pub max: f64,
    pub rms: f64,
}

/// Accumulates [`NormStats`]. The result does not depend on the order in
/// which values are pushed: squares are summed in ascending order.
#[derive(Debug, Clone, Default)]
pub struct NormAccumulator {
    values: Vec<f64>,
}

impl NormAccumulator {
    pub fn push(&mut self, x: f64) {
        self.values.push(x.abs());
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(*x))
    }

    pub fn stats(&self) -> NormStats {
        if self.values.is_empty() {
            return NormStats::default();
        }
        let mut sq: Vec<f64> = self.values.iter().map(|x| x * x).collect();
        sq.sort_by(f64::total_cmp);
        let max = self.max();
        let rms = (sq.iter().sum::<f64>() / sq.len() as f64).sqrt();
        // rms <= max must hold even after rounding
        NormStats { max, rms: rms.min(max) }
    }
}

/// A named tolerance check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// A boolean condition recorded as value 0 (holds) or 1 (violated).
    pub fn holds(name: &str, ok: bool) -> Self {
        Check {
            name: name.to_string(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

struct Sci17<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for Sci17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Pretty JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci17(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("report serializes");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}
