//! Grayscale heatmaps of impact matrices, written as ASCII PGM.

use std::fmt::Write as _;

use crate::matrix::ImpactMatrix;

/// An 8-bit grayscale image stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Plain PGM (`P2`) with maxval 255, one image row per text line.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            let mut first = true;
            for p in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{p}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Per-matrix min-max scaled heatmap. Row `i` is the affected unit,
/// column `j` the perturbed one. A constant matrix renders all black.
pub fn render_heatmap(m: &ImpactMatrix) -> GrayImage {
    let n = m.len();
    let (min, max) = m.min_max();
    let range = max - min;
    let pixels = m
        .rows()
        .flat_map(|row| row.iter())
        .map(|&v| {
            if range > 0.0 {
                // f64::round rounds half away from zero.
                (255.0 * (v - min) / range).round().clamp(0.0, 255.0) as u8
            } else {
                0
            }
        })
        .collect();
    GrayImage {
        width: n,
        height: n,
        pixels,
    }
}
