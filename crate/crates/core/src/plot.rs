//! Grayscale rendering of focused images as binary PGM with peak markers.

use ndarray::Array2;

/// Decibel span mapped onto the gray scale.
pub const DEFAULT_DYNAMIC_RANGE_DB: f64 = 40.0;

const MARKER_RADIUS: i64 = 4;

/// 8-bit gray image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    fn set(&mut self, row: i64, col: i64, v: u8) {
        if row >= 0 && col >= 0 && (row as usize) < self.height && (col as usize) < self.width {
            self.pixels[row as usize * self.width + col as usize] = v;
        }
    }
}

/// Maps `20 log10(|x|/max)` over `[-dynamic_range_db, 0]` onto `[0, 255]`.
/// Rows are azimuth, columns range. Each marker `(azimuth, range)` in
/// cells gets a square outline.
pub fn render(mag: &Array2<f64>, dynamic_range_db: f64, markers: &[(f64, f64)]) -> GrayImage {
    let (height, width) = mag.dim();
    let peak = mag.iter().cloned().fold(0.0, f64::max);
    let pixels = mag
        .iter()
        .map(|&m| {
            if peak <= 0.0 || m <= 0.0 {
                return 0;
            }
            let db = 20.0 * (m / peak).log10();
            (255.0 * (1.0 + db / dynamic_range_db)).clamp(0.0, 255.0).round() as u8
        })
        .collect();
    let mut img = GrayImage { width, height, pixels };
    for &(az, rg) in markers {
        let (r0, c0) = (az.round() as i64, rg.round() as i64);
        for d in -MARKER_RADIUS..=MARKER_RADIUS {
            for (r, c) in [(r0 - MARKER_RADIUS, c0 + d), (r0 + MARKER_RADIUS, c0 + d), (r0 + d, c0 - MARKER_RADIUS), (r0 + d, c0 + MARKER_RADIUS)] {
                img.set(r, c, 255);
            }
        }
    }
    img
}

/// Cell of the largest magnitude, `(azimuth, range)`.
pub fn brightest(mag: &Array2<f64>) -> Option<(f64, f64)> {
    mag.indexed_iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|((j, m), _)| (j as f64, m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_renders_one_bright_pixel() {
        let mut mag = Array2::zeros((32, 32));
        mag[(10, 20)] = 1.0;
        let img = render(&mag, DEFAULT_DYNAMIC_RANGE_DB, &[]);
        assert_eq!(img.pixels.iter().filter(|&&p| p > 0).count(), 1);
        assert_eq!(img.pixels[10 * 32 + 20], 255);
    }

    #[test]
    fn markers_outline_the_peak_without_covering_it() {
        let mut mag = Array2::zeros((32, 32));
        mag[(10, 20)] = 1.0;
        let img = render(&mag, DEFAULT_DYNAMIC_RANGE_DB, &[brightest(&mag).unwrap()]);
        assert_eq!(img.pixels[6 * 32 + 20], 255);
        assert_eq!(img.pixels[10 * 32 + 24], 255);
        assert_eq!(img.pixels[10 * 32 + 21], 0);
        assert_eq!(img.pixels.iter().filter(|&&p| p == 255).count(), 1 + 8 * MARKER_RADIUS as usize);
    }

    #[test]
    fn markers_near_the_border_are_clipped() {
        let mag = Array2::from_elem((4, 4), 1.0);
        let img = render(&mag, DEFAULT_DYNAMIC_RANGE_DB, &[(0.0, 0.0)]);
        assert_eq!(img.pixels.len(), 16);
    }

    #[test]
    fn pgm_header() {
        let img = render(&Array2::zeros((2, 3)), DEFAULT_DYNAMIC_RANGE_DB, &[]);
        let pgm = img.to_pgm();
        assert!(pgm.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(pgm.len(), 11 + 6);
    }
}
