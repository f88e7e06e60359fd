//! Command implementations behind the `ghwc` binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ghw_codec::baselines::{haar_dwt_compress, jpeg_like_compress};
use ghw_codec::block::{Lambda, Mu};
use ghw_codec::pgm::{read_pgm, write_pgm, PgmFormat};
use ghw_codec::{metrics, pipeline, CodecParams, PixelMatrix};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ghwc", version, about = "Gradient Haar wavelet image codec")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a PGM image into a GHWC container.
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Recursion depth; stored samples are 1/2^levels of the pixels.
        #[arg(long, default_value_t = 1)]
        levels: u8,
        /// Balancing coefficient as a fraction, e.g. 1/8.
        #[arg(long, default_value_t = Lambda::default())]
        lambda: Lambda,
        /// Decoder coefficient recorded in the container.
        #[arg(long, default_value_t = Mu::default())]
        mu: Mu,
    },
    /// Reconstruct a PGM image from a GHWC container.
    Decompress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the coefficient stored in the container.
        #[arg(long)]
        mu: Option<Mu>,
    },
    /// Compare two PGM images.
    Metrics {
        reference: PathBuf,
        test: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the codec against the baselines on a directory of PGM images.
    Bench {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
        cr: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Compress {
            input,
            out: dest,
            levels,
            lambda,
            mu,
        } => cmd_compress(&input, &dest, levels, CodecParams { lambda, mu }, out),
        Command::Decompress {
            input,
            out: dest,
            mu,
        } => cmd_decompress(&input, &dest, mu, out),
        Command::Metrics {
            reference,
            test,
            json,
        } => cmd_metrics(&reference, &test, json, out),
        Command::Bench { input, cr, format } => cmd_bench(&input, &cr, format, out),
    }
}

fn load_pgm(path: &Path) -> Result<PixelMatrix> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_pgm(&bytes).with_context(|| format!("{}", path.display()))
}

pub fn cmd_compress(
    input: &Path,
    dest: &Path,
    levels: u8,
    params: CodecParams,
    out: &mut dyn Write,
) -> Result<()> {
    let img = load_pgm(input)?;
    let c = pipeline::compress_multilevel(&img, levels, params)?;
    fs::write(dest, pipeline::serialize(&c)?)
        .with_context(|| format!("writing {}", dest.display()))?;
    writeln!(
        out,
        "CR {:.4} ({} samples stored for {}x{} pixels)",
        c.compression_ratio(),
        c.stored_samples(),
        c.padded_width,
        c.padded_height
    )?;
    Ok(())
}

pub fn cmd_decompress(
    input: &Path,
    dest: &Path,
    mu: Option<Mu>,
    out: &mut dyn Write,
) -> Result<()> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let c = pipeline::deserialize(&bytes)?;
    let params = mu.map_or(c.params(), |mu| c.params().with_mu(mu));
    let img = pipeline::decompress_multilevel(&c, params)?;
    fs::write(dest, write_pgm(&img, PgmFormat::P5))
        .with_context(|| format!("writing {}", dest.display()))?;
    writeln!(
        out,
        "{}x{} image, mu {}",
        img.width(),
        img.height(),
        params.mu
    )?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsReport {
    pub mae: f64,
    pub mse: f64,
    /// `None` for identical images.
    pub psnr: Option<f64>,
    pub ssim: f64,
    /// `None` when the image is smaller than one SSIM window.
    pub ssim_windowed: Option<f64>,
}

impl MetricsReport {
    pub fn new(reference: &PixelMatrix, test: &PixelMatrix) -> Result<Self> {
        let mse = metrics::mse(reference, test)?;
        let psnr = metrics::psnr_from_mse(mse);
        let (w, h) = reference.dims();
        let ssim_windowed = if w >= metrics::SSIM_WINDOW && h >= metrics::SSIM_WINDOW {
            Some(metrics::ssim(reference, test, true)?)
        } else {
            None
        };
        Ok(Self {
            mae: metrics::mae(reference, test)?,
            mse,
            psnr: psnr.is_finite().then_some(psnr),
            ssim: metrics::ssim(reference, test, false)?,
            ssim_windowed,
        })
    }
}

pub fn cmd_metrics(reference: &Path, test: &Path, json: bool, out: &mut dyn Write) -> Result<()> {
    let report = MetricsReport::new(&load_pgm(reference)?, &load_pgm(test)?)?;
    if json {
        serde_json::to_writer(&mut *out, &report)?;
        writeln!(out)?;
        return Ok(());
    }
    let opt = |v: Option<f64>, na: &str| v.map_or(na.to_string(), |v| format!("{v:.6}"));
    writeln!(out, "mae           {:.6}", report.mae)?;
    writeln!(out, "mse           {:.6}", report.mse)?;
    writeln!(out, "psnr          {}", opt(report.psnr, "inf"))?;
    writeln!(out, "ssim          {:.6}", report.ssim)?;
    writeln!(out, "ssimWindowed  {}", opt(report.ssim_windowed, "n/a"))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Proposed,
    JpegLike,
    HaarDwt,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Proposed, Method::JpegLike, Method::HaarDwt];

    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::JpegLike => "jpegLike",
            Method::HaarDwt => "haarDwt",
        }
    }

    fn reconstruct(self, img: &PixelMatrix, cr: u32) -> Result<PixelMatrix> {
        let levels = cr.trailing_zeros();
        Ok(match self {
            Method::Proposed => {
                let c = pipeline::compress_multilevel(img, levels as u8, CodecParams::default())?;
                pipeline::decompress_multilevel(&c, c.params())?
            }
            Method::JpegLike => jpeg_like_compress(img, cr)?,
            Method::HaarDwt => haar_dwt_compress(img, cr, levels)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image_name: String,
    pub method: Method,
    pub cr: u32,
    pub mae: f64,
    pub psnr: f64,
    pub ssim: f64,
    /// Seconds spent compressing and reconstructing.
    pub wall_time: f64,
}

pub const BENCH_CRS: [u32; 3] = [2, 4, 8];

fn corpus(dir: &Path) -> Result<Vec<(String, PixelMatrix)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pgm")));
    paths.sort();
    ensure!(!paths.is_empty(), "no .pgm images in {}", dir.display());
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            Ok((name, load_pgm(p)?))
        })
        .collect()
}

pub fn bench_rows(dir: &Path, crs: &[u32]) -> Result<Vec<BenchRow>> {
    ensure!(!crs.is_empty(), "at least one CR is required");
    for &cr in crs {
        if !BENCH_CRS.contains(&cr) {
            bail!("unsupported CR {cr}, expected one of 2, 4, 8");
        }
    }
    let mut rows = Vec::new();
    for (name, img) in corpus(dir)? {
        for method in Method::ALL {
            for &cr in crs {
                let start = Instant::now();
                let rec = method
                    .reconstruct(&img, cr)
                    .with_context(|| format!("{name}: {} at CR {cr}", method.name()))?;
                let wall_time = start.elapsed().as_secs_f64();
                rows.push(BenchRow {
                    image_name: name.clone(),
                    method,
                    cr,
                    mae: metrics::mae(&img, &rec)?,
                    psnr: metrics::psnr(&img, &rec)?,
                    ssim: metrics::ssim(&img, &rec, false)?,
                    wall_time,
                });
            }
        }
    }
    rows.sort_by(|a, b| (&a.image_name, a.method, a.cr).cmp(&(&b.image_name, b.method, b.cr)));
    rows.dedup_by(|a, b| (&a.image_name, a.method, a.cr) == (&b.image_name, b.method, b.cr));
    Ok(rows)
}

/// A titled table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn format_psnr(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.2}")
    } else {
        "inf".into()
    }
}

type CellFormat = fn(&BenchRow) -> String;

pub fn bench_tables(rows: &[BenchRow]) -> Vec<Table> {
    let mut crs: Vec<u32> = rows.iter().map(|r| r.cr).collect();
    crs.sort_unstable();
    crs.dedup();
    let mut images: Vec<&str> = rows.iter().map(|r| r.image_name.as_str()).collect();
    images.dedup();

    let header: Vec<String> = std::iter::once("image")
        .chain(Method::ALL.map(Method::name))
        .map(String::from)
        .collect();
    let metrics: [(&str, CellFormat); 3] = [
        ("MAE", |r| format!("{:.4}", r.mae)),
        ("PSNR", |r| format_psnr(r.psnr)),
        ("SSIM", |r| format!("{:.4}", r.ssim)),
    ];

    let mut tables = Vec::new();
    for (label, cell) in metrics {
        for &cr in &crs {
            let body = images
                .iter()
                .map(|&image| {
                    let mut line = vec![image.to_string()];
                    for method in Method::ALL {
                        let row = rows
                            .iter()
                            .find(|r| r.image_name == image && r.method == method && r.cr == cr);
                        line.push(row.map_or("-".into(), cell));
                    }
                    line
                })
                .collect();
            tables.push(Table {
                title: format!("{label} CR={cr}"),
                header: header.clone(),
                rows: body,
            });
        }
    }

    let timing = Method::ALL
        .iter()
        .map(|&method| {
            let times: Vec<f64> = rows
                .iter()
                .filter(|r| r.method == method)
                .map(|r| r.wall_time)
                .collect();
            let mean = times.iter().sum::<f64>() / times.len().max(1) as f64;
            vec![method.name().to_string(), format!("{mean:.6}")]
        })
        .collect();
    tables.push(Table {
        title: "mean wall time in seconds (machine-dependent)".into(),
        header: vec!["method".into(), "seconds".into()],
        rows: timing,
    });
    tables
}

fn render_csv(tables: &[Table], out: &mut dyn Write) -> Result<()> {
    for (i, table) in tables.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "# {}", table.title)?;
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn render_text(tables: &[Table], out: &mut dyn Write) -> Result<()> {
    let mut buf = String::new();
    for (i, table) in tables.iter().enumerate() {
        if i > 0 {
            buf.push('\n');
        }
        writeln!(buf, "{}", table.title)?;
        let mut widths: Vec<usize> = table.header.iter().map(String::len).collect();
        for row in &table.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        for line in std::iter::once(&table.header).chain(&table.rows) {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(j, (cell, &w))| {
                    if j == 0 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            writeln!(buf, "{}", cells.join("  ").trim_end())?;
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn cmd_bench(dir: &Path, crs: &[u32], format: Format, out: &mut dyn Write) -> Result<()> {
    let tables = bench_tables(&bench_rows(dir, crs)?);
    match format {
        Format::Csv => render_csv(&tables, out),
        Format::Text => render_text(&tables, out),
    }
}
