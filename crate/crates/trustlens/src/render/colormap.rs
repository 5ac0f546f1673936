//! Perceptually ordered colormap for trust values.
//!
//! Five anchor colors along the viridis ramp, linearly interpolated in RGB.
//! The ramp's luminance rises monotonically with the input, so higher trust
//! always reads as brighter regardless of color vision.

/// Anchor stops as `(position, [r, g, b])`, positions strictly increasing
/// over [0, 1].
pub const ANCHORS: [(f64, [u8; 3]); 5] = [
    (0.00, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.50, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.00, [253, 231, 37]),
];

/// Maps a trust value in [0,1] to a color; out-of-range and non-finite
/// inputs are clamped.
pub fn viridis(t: f64) -> [u8; 3] {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    for window in ANCHORS.windows(2) {
        let (lo_t, lo_c) = window[0];
        let (hi_t, hi_c) = window[1];
        if t <= hi_t {
            let f = (t - lo_t) / (hi_t - lo_t);
            let mut rgb = [0u8; 3];
            for i in 0..3 {
                let v = lo_c[i] as f64 + f * (hi_c[i] as f64 - lo_c[i] as f64);
                rgb[i] = v.round() as u8;
            }
            return rgb;
        }
    }
    ANCHORS[ANCHORS.len() - 1].1
}

pub fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Relative luminance on a 0..255 scale (Rec. 709 weights).
pub fn luminance(rgb: [u8; 3]) -> f64 {
    0.2126 * rgb[0] as f64 + 0.7152 * rgb[1] as f64 + 0.0722 * rgb[2] as f64
}

/// Text color that stays readable on a cell of the given fill.
pub fn text_color_on(rgb: [u8; 3]) -> &'static str {
    if luminance(rgb) > 140.0 {
        "#1b1b1b"
    } else {
        "#f2f2f2"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors_map_to_themselves() {
        for (t, c) in ANCHORS {
            assert_eq!(viridis(t), c, "anchor at {t}");
        }
    }

    #[test]
    fn interpolation_is_componentwise_linear() {
        let mid = viridis(0.125);
        for i in 0..3 {
            let expected = (ANCHORS[0].1[i] as f64 + ANCHORS[1].1[i] as f64) / 2.0;
            assert!((mid[i] as f64 - expected).abs() <= 0.5, "component {i}");
        }
    }

    #[test]
    fn out_of_range_inputs_clamp() {
        assert_eq!(viridis(-0.5), ANCHORS[0].1);
        assert_eq!(viridis(1.5), ANCHORS[4].1);
        assert_eq!(viridis(f64::NAN), ANCHORS[0].1);
    }

    #[test]
    fn luminance_rises_along_the_ramp() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let l = luminance(viridis(i as f64 / 100.0));
            assert!(l >= prev, "luminance dipped at {i}");
            prev = l;
        }
        assert!(luminance(ANCHORS[4].1) - luminance(ANCHORS[0].1) > 100.0);
    }

    #[test]
    fn hex_is_lowercase_rgb() {
        assert_eq!(hex([253, 231, 37]), "#fde725");
        assert_eq!(hex([0, 0, 0]), "#000000");
    }
}
