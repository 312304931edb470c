//! dB conversions. Everything inside the crate works in linear units (watts).

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(value: f64) -> f64 {
    10.0 * value.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts) + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_powers() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(5.0) - 0.003_162_277_660_168_379).abs() < 1e-17);
        assert!((watts_to_dbm(dbm_to_watts(-104.0)) + 104.0).abs() < 1e-12);
    }
}
