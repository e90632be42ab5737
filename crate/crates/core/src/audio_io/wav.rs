use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{AudioClip, Waveform};
use crate::error::{Error, Result};

const PCM16_SCALE: f64 = 32768.0;

/// Read a 16-bit PCM WAV file. Multi-channel files are mixed down to mono by
/// averaging the channels of each frame.
pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let wav_err = |message: String| Error::Wav {
        path: path.to_path_buf(),
        message,
    };

    let reader = WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => wav_err(other.to_string()),
    })?;
    let spec = reader.spec();
    if spec.sample_format != SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(wav_err(format!(
            "unsupported encoding ({:?}, {} bits); only 16-bit PCM is accepted",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let channels = spec.channels.max(1) as usize;

    let raw: Vec<i16> = reader
        .into_samples::<i16>()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| wav_err(e.to_string()))?;
    if raw.len() < channels {
        return Err(wav_err("data chunk holds no sample frames".into()));
    }

    let samples = raw
        .chunks_exact(channels)
        .map(|frame| {
            let sum: f64 = frame.iter().map(|&s| s as f64 / PCM16_SCALE).sum();
            sum / channels as f64
        })
        .collect();

    let source_id = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(AudioClip {
        samples,
        sample_rate: spec.sample_rate,
        source_id,
    })
}

fn to_pcm16(sample: f64) -> i16 {
    let scaled = (sample * PCM16_SCALE).round();
    scaled.clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

/// Write a waveform as mono 16-bit PCM at its own sample rate. Values are
/// rounded to the nearest code and saturated, so 1.0 is stored as 32767.
pub fn save_wav<W: Waveform + ?Sized>(signal: &W, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let spec = WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let map = |e: hound::Error| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Wav {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    };
    let mut writer = WavWriter::create(path, spec).map_err(map)?;
    {
        let mut w16 = writer.get_i16_writer(signal.samples().len() as u32);
        for &s in signal.samples() {
            w16.write_sample(to_pcm16(s));
        }
        w16.flush().map_err(map)?;
    }
    writer.finalize().map_err(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithm::Algorithm;
    use crate::audio_io::VibrationSignal;
    use std::f64::consts::PI;

    fn write_raw(path: &Path, channels: u16, rate: u32, data: &[i16]) {
        let spec = WavSpec {
            channels,
            sample_rate: rate,
            bits_per_sample: 16,
            sample_format: SampleFormat::Int,
        };
        let mut w = WavWriter::create(path, spec).unwrap();
        for &s in data {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
    }

    #[test]
    fn five_second_file_length() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.wav");
        write_raw(&p, 1, 44100, &vec![0i16; 220500]);
        let clip = load_wav(&p).unwrap();
        assert_eq!(clip.len(), 220500);
        assert_eq!(clip.sample_rate, 44100);
        assert_eq!(clip.source_id.as_deref(), Some("a"));
    }

    #[test]
    fn stereo_mixdown_and_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.wav");
        write_raw(&p, 2, 8000, &[16384, -16384, -32768, -32768]);
        let clip = load_wav(&p).unwrap();
        assert_eq!(clip.samples, vec![0.0, -1.0]);
    }

    #[test]
    fn rejects_missing_float_and_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_wav(dir.path().join("nope.wav")), Err(Error::Io { .. })));

        let f = dir.path().join("f.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        };
        let mut w = WavWriter::create(&f, spec).unwrap();
        w.write_sample(0.5f32).unwrap();
        w.finalize().unwrap();
        assert!(matches!(load_wav(&f), Err(Error::Wav { .. })));

        let e = dir.path().join("e.wav");
        write_raw(&e, 1, 8000, &[]);
        assert!(matches!(load_wav(&e), Err(Error::Wav { .. })));
    }

    #[test]
    fn round_trip_within_one_code() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sine.wav");
        let clip = AudioClip::new(
            (0..8000)
                .map(|n| 0.9 * (2.0 * PI * 200.0 * n as f64 / 8000.0).sin())
                .collect(),
            8000,
        );
        save_wav(&clip, &p).unwrap();
        let back = load_wav(&p).unwrap();
        let worst = clip
            .samples
            .iter()
            .zip(&back.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1.0 / 32768.0, "worst {worst}");
    }

    #[test]
    fn vibration_header_and_saturation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.wav");
        let mut samples = vec![0.0; 40000];
        samples[0] = 1.0;
        let sig = VibrationSignal::new(samples, Algorithm::HapticGen);
        save_wav(&sig, &p).unwrap();
        let reader = WavReader::open(&p).unwrap();
        assert_eq!(reader.spec().sample_rate, 8000);
        assert_eq!(reader.spec().channels, 1);
        assert_eq!(reader.duration(), 40000);
        let first: i16 = reader.into_samples::<i16>().next().unwrap().unwrap();
        assert_eq!(first, 32767);
    }

    #[test]
    fn unwritable_path() {
        let clip = AudioClip::new(vec![0.0; 4], 8000);
        let err = save_wav(&clip, "/nonexistent-dir/x/y.wav").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
