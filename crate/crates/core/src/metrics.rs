//! Quality and security analysis: embedding rate, MSE/PSNR, SSIM,
//! histogram, Shannon entropy, adjacent-pixel correlation and the data
//! expansion factor.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formats::GrayRaster;

/// Peak signal-to-noise ratio. Exact equality gets a distinguished
/// sentinel rather than a large float, since recovery in this scheme is
/// bit-exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Infinite,
    Db(f64),
}

impl Psnr {
    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }

    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Infinite => None,
            Psnr::Db(v) => Some(v),
        }
    }
}

impl std::fmt::Display for Psnr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Psnr::Infinite => f.write_str("+inf"),
            Psnr::Db(v) => write!(f, "{v:.4}"),
        }
    }
}

impl Serialize for Psnr {
    // JSON has no infinity; the sentinel serializes as null.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psnr::Infinite => serializer.serialize_none(),
            Psnr::Db(v) => serializer.serialize_f64(*v),
        }
    }
}

/// Embedded bits per pixel. The caller picks the denominator convention;
/// the container-size denominator reproduces the published capacity figure
/// and the original-pixel denominator is the honest per-source-pixel rate.
pub fn embedding_rate(embedded_bits: u64, denominator_pixels: u64) -> Result<f64> {
    if denominator_pixels == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(embedded_bits as f64 / denominator_pixels as f64)
}

/// Mean squared error and PSNR (`10*log10(255^2 / mse)`) between two
/// equal-sized rasters.
pub fn psnr(original: &GrayRaster, candidate: &GrayRaster) -> Result<(f64, Psnr)> {
    check_dimensions(original, candidate)?;
    let sum: u64 = original
        .pixels()
        .iter()
        .zip(candidate.pixels())
        .map(|(&a, &b)| {
            let d = i64::from(a) - i64::from(b);
            (d * d) as u64
        })
        .sum();
    if sum == 0 {
        return Ok((0.0, Psnr::Infinite));
    }
    let mse = sum as f64 / original.pixel_count() as f64;
    Ok((mse, Psnr::Db(10.0 * (255.0f64 * 255.0 / mse).log10())))
}

const SSIM_WINDOW: usize = 8;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

/// Mean structural similarity over all 8x8 windows at unit stride, with
/// the conventional constants K1=0.01, K2=0.03, L=255 and uniform window
/// weighting. Identical rasters score exactly 1.0.
pub fn ssim(original: &GrayRaster, candidate: &GrayRaster) -> Result<f64> {
    check_dimensions(original, candidate)?;
    let (w, h) = (original.width() as usize, original.height() as usize);
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::WindowTooLarge(
            original.width(),
            original.height(),
            SSIM_WINDOW as u32,
        ));
    }

    // Summed-area tables make each window O(1); all sums stay exact in u64.
    let sat_x = summed_area(original.pixels(), w, h, |a, _| u64::from(a));
    let sat_y = summed_area(candidate.pixels(), w, h, |a, _| u64::from(a));
    let sat_xx = summed_area(original.pixels(), w, h, |a, _| u64::from(a) * u64::from(a));
    let sat_yy = summed_area(candidate.pixels(), w, h, |a, _| u64::from(a) * u64::from(a));
    let sat_xy = {
        let xs = original.pixels();
        let ys = candidate.pixels();
        summed_area(xs, w, h, |_, i| u64::from(xs[i]) * u64::from(ys[i]))
    };

    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let mut total = 0.0;
    let mut windows = 0u64;
    for y in 0..=(h - SSIM_WINDOW) {
        for x in 0..=(w - SSIM_WINDOW) {
            let sx = window_sum(&sat_x, w, x, y) as f64;
            let sy = window_sum(&sat_y, w, x, y) as f64;
            let sxx = window_sum(&sat_xx, w, x, y) as f64;
            let syy = window_sum(&sat_yy, w, x, y) as f64;
            let sxy = window_sum(&sat_xy, w, x, y) as f64;

            let mx = sx / n;
            let my = sy / n;
            let vx = sxx / n - mx * mx;
            let vy = syy / n - my * my;
            let cov = sxy / n - mx * my;

            total += ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2));
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}

fn summed_area(pixels: &[u8], w: usize, h: usize, f: impl Fn(u8, usize) -> u64) -> Vec<u64> {
    // Table is (w+1) x (h+1) with a zero border.
    let stride = w + 1;
    let mut sat = vec![0u64; stride * (h + 1)];
    for y in 0..h {
        let mut row_sum = 0u64;
        for x in 0..w {
            let i = y * w + x;
            row_sum += f(pixels[i], i);
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row_sum;
        }
    }
    sat
}

fn window_sum(sat: &[u64], w: usize, x: usize, y: usize) -> u64 {
    let stride = w + 1;
    let (x1, y1) = (x + SSIM_WINDOW, y + SSIM_WINDOW);
    sat[y1 * stride + x1] + sat[y * stride + x] - sat[y * stride + x1] - sat[y1 * stride + x]
}

/// Per-value pixel counts.
pub fn histogram(raster: &GrayRaster) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &p in raster.pixels() {
        counts[p as usize] += 1;
    }
    counts
}

/// Shannon entropy of the pixel distribution, in bits (0..=8).
pub fn entropy(raster: &GrayRaster) -> f64 {
    let counts = histogram(raster);
    let n = raster.pixel_count() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Neighbor direction for adjacent-pixel correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diagonal,
    ];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (1, 0),
            Direction::Vertical => (0, 1),
            Direction::Diagonal => (1, 1),
        }
    }
}

/// Pearson correlation between each pixel and its neighbor along
/// `direction`. Returns `None` when fewer than two pixels line up in that
/// direction or when either margin is constant (zero variance).
pub fn adjacent_correlation(raster: &GrayRaster, direction: Direction) -> Option<f64> {
    let (dx, dy) = direction.offset();
    let (w, h) = (raster.width() as usize, raster.height() as usize);
    if w <= dx || h <= dy {
        return None;
    }
    let px = raster.pixels();
    let (mut n, mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0u64, 0u64, 0u64, 0u64, 0u64, 0u64);
    for y in 0..h - dy {
        for x in 0..w - dx {
            let a = u64::from(px[y * w + x]);
            let b = u64::from(px[(y + dy) * w + (x + dx)]);
            n += 1;
            sx += a;
            sy += b;
            sxx += a * a;
            syy += b * b;
            sxy += a * b;
        }
    }
    // n * sxx and (sx)^2 stay far below 2^63 for desk-scale rasters.
    let var_x = (n * sxx) as i128 - (sx as i128) * (sx as i128);
    let var_y = (n * syy) as i128 - (sy as i128) * (sy as i128);
    if var_x == 0 || var_y == 0 {
        return None;
    }
    let cov = (n * sxy) as i128 - (sx as i128) * (sy as i128);
    Some(cov as f64 / ((var_x as f64).sqrt() * (var_y as f64).sqrt()))
}

/// Container-size growth relative to the source image; two pixels becoming
/// three bytes yields exactly 1.5 for even pixel counts.
pub fn expansion_factor(original_pixels: u64, container_body_bytes: u64) -> Result<f64> {
    if original_pixels == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(container_body_bytes as f64 / original_pixels as f64)
}

/// Fidelity of a recovered image plus the achieved embedding rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    /// Embedded bits per marked-container byte (the published convention).
    pub ec_bpp: f64,
    pub mse: f64,
    pub psnr_db: Psnr,
    pub ssim: f64,
}

impl QualityReport {
    /// Compare `original` and `recovered` and attach an embedding rate.
    pub fn compute(original: &GrayRaster, recovered: &GrayRaster, ec_bpp: f64) -> Result<Self> {
        let (mse, psnr_db) = psnr(original, recovered)?;
        let ssim = ssim(original, recovered)?;
        Ok(Self {
            ec_bpp,
            mse,
            psnr_db,
            ssim,
        })
    }

    /// Line-oriented `key=value` rendering.
    pub fn to_kv(&self) -> String {
        format!(
            "ec_bpp={:.6}\nmse={:.6}\npsnr_db={}\nssim={:.6}\n",
            self.ec_bpp, self.mse, self.psnr_db, self.ssim
        )
    }
}

/// Statistical profile of a raster (typically the marked container body).
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityReport {
    pub histogram: [u64; 256],
    pub entropy_bits: f64,
    pub horizontal_correlation: Option<f64>,
    pub vertical_correlation: Option<f64>,
    pub diagonal_correlation: Option<f64>,
}

impl SecurityReport {
    pub fn analyze(raster: &GrayRaster) -> Self {
        Self {
            histogram: histogram(raster),
            entropy_bits: entropy(raster),
            horizontal_correlation: adjacent_correlation(raster, Direction::Horizontal),
            vertical_correlation: adjacent_correlation(raster, Direction::Vertical),
            diagonal_correlation: adjacent_correlation(raster, Direction::Diagonal),
        }
    }

    pub fn correlation(&self, direction: Direction) -> Option<f64> {
        match direction {
            Direction::Horizontal => self.horizontal_correlation,
            Direction::Vertical => self.vertical_correlation,
            Direction::Diagonal => self.diagonal_correlation,
        }
    }

    /// The 256 histogram counts as one comma-separated line.
    pub fn histogram_csv(&self) -> String {
        self.histogram
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Line-oriented `key=value` rendering; undefined correlations render
    /// as `nan`.
    pub fn to_kv(&self) -> String {
        let corr = |c: Option<f64>| c.map_or("nan".to_string(), |v| format!("{v:.6}"));
        format!(
            "entropy_bits={:.6}\ncorrelation_horizontal={}\ncorrelation_vertical={}\ncorrelation_diagonal={}\nhistogram={}\n",
            self.entropy_bits,
            corr(self.horizontal_correlation),
            corr(self.vertical_correlation),
            corr(self.diagonal_correlation),
            self.histogram_csv()
        )
    }
}

impl Serialize for SecurityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SecurityReport", 5)?;
        s.serialize_field("histogram", &self.histogram[..])?;
        s.serialize_field("entropy_bits", &self.entropy_bits)?;
        s.serialize_field("horizontal_correlation", &self.horizontal_correlation)?;
        s.serialize_field("vertical_correlation", &self.vertical_correlation)?;
        s.serialize_field("diagonal_correlation", &self.diagonal_correlation)?;
        s.end()
    }
}

fn check_dimensions(a: &GrayRaster, b: &GrayRaster) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}
