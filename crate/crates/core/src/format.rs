//! Text output helpers shared by the CLI and the examples.

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, std::f64::consts::PI, 0.0] {
            assert_eq!(f17(x).parse::<f64>().unwrap(), x);
        }
    }
}
