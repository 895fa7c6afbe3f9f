//! `rdhe`: encrypt, embed, extract, recover and measure, over files.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or rejected input,
//! 3 parse error, 4 capacity exceeded, 5 corruption detected.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rdhe_core::bits::{bits_to_bytes, bytes_to_bits};
use rdhe_core::codec::{EmbedMode, PublicId};
use rdhe_core::formats::{read_container, read_pgm, write_container, write_pgm};
use rdhe_core::keystream::{EncryptionKey, HidingKey};
use rdhe_core::metrics::{embedding_rate, QualityReport, SecurityReport};
use rdhe_core::pipeline::{
    capacity_of, hider_embed, provider_encrypt, receiver_process, Beta, MarkedContainer,
};
use rdhe_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "rdhe",
    version,
    about = "Reversible data hiding in encrypted images",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IdModeArgs {
    /// Public identity (2..=15; 4..=9 in 2-bit mode)
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=15))]
    id: u8,
    /// Bits embedded per coefficient
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    mode: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a PGM image into an embeddable container
    Encrypt {
        /// Input image (binary PGM, maxval 255)
        #[arg(long = "in")]
        input: PathBuf,
        /// Output container file
        #[arg(long)]
        out: PathBuf,
        /// Beta sidecar to hand to the data hider
        #[arg(long)]
        beta: PathBuf,
        /// Encryption key: literal text or @path for raw bytes
        #[arg(long)]
        ke: String,
        #[command(flatten)]
        id_mode: IdModeArgs,
    },
    /// Embed a message into an encrypted container
    Embed {
        /// Input container from `encrypt`
        #[arg(long = "in")]
        input: PathBuf,
        /// Output marked container
        #[arg(long)]
        out: PathBuf,
        /// Beta sidecar produced by `encrypt`
        #[arg(long)]
        beta: PathBuf,
        /// Message file; its bytes are embedded bit-for-bit
        #[arg(long)]
        msg: PathBuf,
        /// Hiding key: literal text or @path for raw bytes
        #[arg(long)]
        kw: String,
    },
    /// Extract the message from a marked container (hiding key only)
    Extract {
        /// Input marked container
        #[arg(long = "in")]
        input: PathBuf,
        /// Output message file
        #[arg(long)]
        out: PathBuf,
        /// Hiding key: literal text or @path for raw bytes
        #[arg(long)]
        kw: String,
    },
    /// Recover the original image (encryption key; message too with --kw)
    Recover {
        /// Input marked container
        #[arg(long = "in")]
        input: PathBuf,
        /// Output image (binary PGM)
        #[arg(long)]
        out: PathBuf,
        /// Encryption key: literal text or @path for raw bytes
        #[arg(long)]
        ke: String,
        /// Hiding key; also extracts the message when given
        #[arg(long, requires = "msg")]
        kw: Option<String>,
        /// Output message file (with --kw)
        #[arg(long)]
        msg: Option<PathBuf>,
    },
    /// Quality and security reports for a recovery run
    Metrics {
        /// The original image (binary PGM)
        original: PathBuf,
        /// The recovered image (binary PGM)
        recovered: PathBuf,
        /// The marked container
        container: PathBuf,
        /// Report file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Core(CoreError),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 1,
            CliError::Core(e) => match e {
                CoreError::Parse(_) | CoreError::MalformedPayload(_) => 3,
                CoreError::CapacityExceeded { .. } => 4,
                CoreError::Corruption(_) => 5,
                _ => 2, // rejected input: bad id/mode/key/image for this call
            },
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Encrypt {
            input,
            out,
            beta,
            ke,
            id_mode,
        } => {
            let image = read_pgm(&read_file(&input)?)?;
            let key = encryption_key(&ke)?;
            let id = PublicId::new(id_mode.id)?;
            let mode = EmbedMode::from_bits(id_mode.mode)?;
            let (container, beta_bits) = provider_encrypt(&image, &key, id, mode)?;
            write_file(&out, &write_container(&container))?;
            write_file(&beta, beta_sidecar(beta_bits).as_bytes())?;
            Ok(())
        }
        Command::Embed {
            input,
            out,
            beta,
            msg,
            kw,
        } => {
            let container = read_container(&read_file(&input)?)?;
            let beta = parse_beta_sidecar(&read_file(&beta)?)?;
            let message = bytes_to_bits(&read_file(&msg)?);
            let key = hiding_key(&kw)?;
            let marked = hider_embed(&container, beta, &message, &key)?;
            write_file(&out, &write_container(&marked))?;
            Ok(())
        }
        Command::Extract { input, out, kw } => {
            let container = read_container(&read_file(&input)?)?;
            let key = hiding_key(&kw)?;
            let output = receiver_process(&container, None, Some(&key))?;
            let message = output.message_bits.expect("hiding key was supplied");
            write_file(&out, &bits_to_bytes(&message))?;
            Ok(())
        }
        Command::Recover {
            input,
            out,
            ke,
            kw,
            msg,
        } => {
            let container = read_container(&read_file(&input)?)?;
            let encryption = encryption_key(&ke)?;
            let hiding = kw.as_deref().map(hiding_key).transpose()?;
            let output = receiver_process(&container, Some(&encryption), hiding.as_ref())?;
            let image = output.image.expect("encryption key was supplied");
            write_file(&out, &write_pgm(&image))?;
            if let (Some(bits), Some(msg_path)) = (output.message_bits, msg) {
                write_file(&msg_path, &bits_to_bytes(&bits))?;
            }
            Ok(())
        }
        Command::Metrics {
            original,
            recovered,
            container,
            out,
        } => {
            let original = read_pgm(&read_file(&original)?)?;
            let recovered = read_pgm(&read_file(&recovered)?)?;
            let container = read_container(&read_file(&container)?)?;
            let report = metrics_report(&original, &recovered, &container)?;
            match out {
                Some(path) => write_file(&path, report.as_bytes())?,
                None => print!("{report}"),
            }
            Ok(())
        }
    }
}

/// Both reports as one key=value text block, with the embedding rate in
/// the published convention (container-byte denominator) and the honest
/// per-original-pixel alternative.
fn metrics_report(
    original: &rdhe_core::GrayRaster,
    recovered: &rdhe_core::GrayRaster,
    container: &MarkedContainer,
) -> Result<String, CliError> {
    let capacity = capacity_of(container.width(), container.height(), container.mode())?;
    let ec_expanded = embedding_rate(capacity.total_bits as u64, container.body().len() as u64)?;
    let ec_original = embedding_rate(capacity.total_bits as u64, container.pixel_count() as u64)?;
    let quality = QualityReport::compute(original, recovered, ec_expanded)?;
    let security = SecurityReport::analyze(&container.body_as_raster());
    let expansion = rdhe_core::metrics::expansion_factor(
        container.pixel_count() as u64,
        container.body().len() as u64,
    )?;
    Ok(format!(
        "{}ec_bpp_original={ec_original:.6}\ncapacity_total_bits={}\ncapacity_usable_message_bits={}\nexpansion_factor={expansion:.6}\n{}",
        quality.to_kv(),
        capacity.total_bits,
        capacity.usable_message_bits,
        security.to_kv()
    ))
}

fn beta_sidecar(beta: Beta) -> String {
    let bits = beta.bits();
    format!("{}{}{}{}\n", bits[0], bits[1], bits[2], bits[3])
}

fn parse_beta_sidecar(bytes: &[u8]) -> Result<Beta, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CoreError::Parse("beta sidecar is not UTF-8".into()))?
        .trim();
    if text.len() != 4 || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(CoreError::Parse(format!(
            "beta sidecar must be 4 binary digits, got {text:?}"
        ))
        .into());
    }
    let nibble = text.bytes().fold(0u8, |acc, b| (acc << 1) | (b - b'0'));
    Ok(Beta::from_nibble(nibble)?)
}

/// Keys are literal text (hashed to key material) or `@path` raw bytes.
fn encryption_key(spec: &str) -> Result<EncryptionKey, CliError> {
    match spec.strip_prefix('@') {
        Some(path) => Ok(EncryptionKey::from_bytes(read_file(Path::new(path))?)?),
        None => Ok(EncryptionKey::from_text(spec)),
    }
}

fn hiding_key(spec: &str) -> Result<HidingKey, CliError> {
    match spec.strip_prefix('@') {
        Some(path) => Ok(HidingKey::from_bytes(read_file(Path::new(path))?)?),
        None => Ok(HidingKey::from_text(spec)),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(path.to_path_buf(), e))
}
