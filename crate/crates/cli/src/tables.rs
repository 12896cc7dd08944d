//! Reference data for weekly EUR/USD: growth periods, the wave parameters
//! found in each, and the resulting coefficients of determination. Week 1 is
//! 2001-10-07.

use trendwave_core::decompose::LogisticWave;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePeriod {
    pub name: &'static str,
    pub start: u32,
    pub end: u32,
    pub r2: f64,
    /// `(a, b, y_sat, ratio)` per wave, in published order.
    pub waves: &'static [(f64, f64, f64, f64)],
}

impl ReferencePeriod {
    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn logistic_waves(&self) -> Vec<LogisticWave> {
        self.waves
            .iter()
            .map(|&(a, b, y_sat, _)| LogisticWave { a, b, y_sat })
            .collect()
    }
}

pub const REFERENCE_PERIODS: [ReferencePeriod; 8] = [
    ReferencePeriod {
        name: "I",
        start: 1,
        end: 196,
        r2: 0.991761,
        waves: &[
            (15.43, 20.5, -9.39, -0.00742),
            (3.64, 39.0, 0.96, 0.00169),
            (2.88, 68.0, 0.68, 0.000868),
            (3.43, 86.0, 1.6, 0.00136),
            (6.61, 119.0, 3.65, 0.00116),
            (6.75, 132.0, -1.41, -0.000396),
            (2.66, 154.0, -0.72, -0.000439),
            (26.82, 173.0, 32.72, 0.00176),
            (3.14, 194.0, -0.95, -0.00039),
        ],
    },
    ReferencePeriod {
        name: "II",
        start: 216,
        end: 361,
        r2: 0.988207,
        waves: &[
            (12.83, 219.0, -5.87, -0.0191),
            (2.16, 233.0, -0.253, -0.00146),
            (2.43, 239.0, 0.347, 0.001373),
            (2.38, 261.0, -0.322, -0.0007),
            (0.828, 268.0, 0.0648, 0.000356),
            (1.83, 288.0, 0.197, 0.000359),
            (2.36, 318.0, 0.359, 0.000362),
            (4.09, 329.0, -0.721, -0.00038),
            (1.46, 337.0, 0.256, 0.000354),
            (15.06, 344.0, 15.33, 0.00194),
            (1.52, 353.0, 0.303, 0.000356),
            (1.4, 360.0, -0.28, -0.00034),
        ],
    },
    ReferencePeriod {
        name: "III",
        start: 387,
        end: 428,
        r2: 0.957631,
        waves: &[
            (6.0, 387.0, -1.8, -0.025),
            (1.0, 390.0, 0.16, 0.00667),
            (1.3, 394.0, -0.3, -0.00577),
            (2.7, 398.0, 0.7, 0.00463),
            (1.0, 408.0, 0.1, 0.00104),
            (1.2, 414.0, 0.1, 0.000694),
            (1.1, 419.0, 0.11, 0.000714),
            (4.6, 420.0, 1.57, 0.00237),
            (1.4, 425.0, 0.3, 0.00131),
        ],
    },
    ReferencePeriod {
        name: "IV",
        start: 452,
        end: 518,
        r2: 0.943458,
        waves: &[
            (1.8, 459.0, 0.58, 0.00895),
            (3.06, 463.0, -1.32, -0.00829),
            (5.99, 470.0, 3.83, 0.00799),
            (4.47, 481.0, -2.18, -0.00393),
            (1.13, 496.0, 0.079, 0.000380),
            (20.56, 500.0, 31.08, 0.00756),
            (1.89, 514.0, 0.32, 0.000661),
        ],
    },
    ReferencePeriod {
        name: "V",
        start: 564,
        end: 667,
        r2: 0.956426,
        waves: &[
            (2.78, 566.0, -0.95, -0.0285),
            (3.0, 572.0, 0.35, 0.00324),
            (2.0, 579.0, -0.3, -0.00234),
            (2.1, 590.0, 0.4, 0.00176),
            (1.1, 599.0, -0.14, -0.000884),
            (1.3, 601.0, 0.07, 0.000354),
            (1.2, 606.0, -0.15, -0.000727),
            (1.1, 610.0, 0.13, 0.000629),
            (1.0, 613.0, -0.16, -0.0008),
            (1.1, 619.0, 0.06, 0.000244),
            (1.2, 622.0, -0.09, -0.000318),
            (1.3, 628.0, 0.17, 0.000503),
            (1.0, 631.0, -0.13, -0.000478),
            (1.7, 636.0, 0.09, 0.000181),
            (1.3, 642.0, -0.11, -0.000267),
            (1.1, 649.0, 0.08, 0.000211),
            (12.9, 649.0, 3.88, 0.000874),
            (1.0, 651.0, -0.07, -0.000199),
            (1.1, 654.0, 0.07, 0.000175),
        ],
    },
    ReferencePeriod {
        name: "VI",
        start: 793,
        end: 865,
        r2: 0.992061,
        waves: &[
            (12.0, 794.0, -4.0, -0.0417),
            (1.4, 799.0, 0.17, 0.00434),
            (1.1, 802.0, -0.05, -0.00114),
            (1.0, 806.0, 0.06, 0.00107),
            (1.1, 809.0, -0.1, -0.00134),
            (1.0, 816.0, 0.05, 0.000521),
            (1.1, 819.0, -0.06, -0.000505),
            (2.8, 828.0, 0.35, 0.000868),
            (1.4, 839.0, -0.22, -0.000836),
            (1.0, 842.0, 0.04, 0.0002),
            (1.0, 844.5, -0.14, -0.000667),
            (15.0, 849.0, 6.0, 0.00175),
            (2.0, 852.5, 0.24, 0.000496),
            (1.7, 861.0, 0.24, 0.000512),
        ],
    },
    ReferencePeriod {
        name: "VII",
        start: 971,
        end: 1029,
        r2: 0.955061,
        waves: &[
            (4.0, 971.0, -0.7, -0.0146),
            (1.1, 974.0, 0.09, 0.00341),
            (1.2, 977.0, -0.07, -0.00162),
            (2.5, 985.0, 0.3, 0.00176),
            (1.0, 989.0, -0.06, -0.000714),
            (1.6, 995.0, -0.15, -0.000868),
            (9.0, 1005.0, 3.0, 0.00225),
            (1.5, 1017.0, -0.15, -0.00051),
            (2.7, 1024.0, 0.58, 0.000959),
        ],
    },
    ReferencePeriod {
        name: "VIII",
        start: 1095,
        end: 1140,
        r2: 0.976349,
        waves: &[
            (3.0, 1097.0, -0.7, -0.0194),
            (1.07, 1102.0, 0.07, 0.00204),
            (3.79, 1111.0, 0.58, 0.00225),
            (2.0, 1116.0, -0.2, -0.00114),
            (1.9, 1125.0, 0.33, 0.0014),
            (1.9, 1128.0, -0.2, -0.000774),
            (17.0, 1133.0, 5.04, 0.0019),
            (2.1, 1136.0, 0.3, 0.00085),
        ],
    },
];

/// Look up a reference period by roman numeral or 1-based position.
pub fn reference_period(key: &str) -> Option<&'static ReferencePeriod> {
    let key = key.trim();
    if let Ok(i) = key.parse::<usize>() {
        return REFERENCE_PERIODS.get(i.checked_sub(1)?);
    }
    REFERENCE_PERIODS
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_match_the_published_column() {
        let lens: Vec<u32> = REFERENCE_PERIODS.iter().map(|p| p.len()).collect();
        assert_eq!(lens, [196, 146, 42, 67, 104, 73, 59, 46]);
    }

    #[test]
    fn waves_sit_near_their_periods() {
        for p in &REFERENCE_PERIODS {
            for &(a, b, _, _) in p.waves {
                assert!(a > 0.0);
                assert!(b >= p.start as f64 && b <= p.end as f64, "{} {b}", p.name);
            }
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(reference_period("vi").unwrap().start, 793);
        assert_eq!(reference_period("3").unwrap().name, "III");
        assert!(reference_period("9").is_none());
        assert!(reference_period("0").is_none());
    }
}
