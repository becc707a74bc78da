//! Progressive transmission of a hologram as disjoint windows.
//!
//! The hologram is cut into equally sized contiguous windows (row bands in
//! 2D), each shipped as a self-describing [`Packet`]. Because the recovery
//! of a union of disjoint windows is the sum of the per-window recoveries,
//! the receiver can render whatever has arrived, in any arrival order.
//!
//! The receiver stores packets and only sums at render time, always in
//! packet-id order, so renders are bit-identical across arrival orders.

mod wire;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::array::{ComplexArray, Shape};
use crate::error::{Error, Result};
use crate::holographic::{self, Hologram, Span, WindowSpec};

pub use wire::{decode_packet, encode_packet, HPKT_MAGIC, HPKT_VERSION};

/// One window of a hologram plus enough metadata to place it.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub packet_id: u32,
    pub total_packets: u32,
    pub window: WindowSpec,
    /// Hologram values inside the window, row-major.
    pub payload: Vec<Complex64>,
    pub source_shape: Shape,
}

impl Packet {
    /// CRC32 of the wire encoding up to (not including) the checksum field.
    pub fn checksum(&self) -> Result<u32> {
        wire::checksum(self)
    }

    fn validate(&self) -> Result<()> {
        if self.packet_id >= self.total_packets {
            return Err(Error::Protocol(format!(
                "packet id {} out of range for {} packets",
                self.packet_id, self.total_packets
            )));
        }
        self.window
            .validate(self.source_shape)
            .map_err(|e| Error::Protocol(format!("packet {}: {e}", self.packet_id)))?;
        if self.payload.len() != self.window.size() {
            return Err(Error::Protocol(format!(
                "packet {} carries {} samples for a window of {}",
                self.packet_id,
                self.payload.len(),
                self.window.size()
            )));
        }
        Ok(())
    }
}

/// Splits a hologram into `num_packets` equal contiguous windows along the
/// leading axis (rows in 2D).
pub fn partition(h: &Hologram, num_packets: usize) -> Result<Vec<Packet>> {
    let shape = h.shape();
    let lead = shape.dims()[0];
    if num_packets == 0 || lead % num_packets != 0 {
        return Err(Error::invalid(format!(
            "{num_packets} packets do not evenly divide leading axis length {lead}"
        )));
    }
    let total = u32::try_from(num_packets).map_err(|_| Error::invalid("too many packets"))?;
    let band = lead / num_packets;
    (0..num_packets)
        .map(|i| {
            let span = Span::new(i * band, band);
            let window = match shape {
                Shape::D1(_) => WindowSpec::D1(span),
                Shape::D2 { cols, .. } => WindowSpec::D2 {
                    rows: span,
                    cols: Span::full(cols),
                },
            };
            let payload = window.indices(shape).into_iter().map(|k| h.data()[k]).collect();
            Ok(Packet {
                packet_id: i as u32,
                total_packets: total,
                window,
                payload,
                source_shape: shape,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverState {
    received: BTreeMap<u32, Packet>,
    source_shape: Shape,
    expected_total: u32,
}

/// Output of [`ReceiverState::render`].
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    /// Sum of per-window recoveries, before rescaling.
    pub recovered: ComplexArray,
    /// `|recovered|` scaled by `sqrt(M / received_samples)`.
    pub amplitude: Vec<f64>,
    /// Fraction of hologram samples received.
    pub coverage: f64,
    pub received_samples: usize,
}

impl ReceiverState {
    pub fn new(source_shape: Shape, expected_total: u32) -> Result<Self> {
        source_shape.validate()?;
        if expected_total == 0 {
            return Err(Error::invalid("a stream has at least one packet"));
        }
        Ok(Self {
            received: BTreeMap::new(),
            source_shape,
            expected_total,
        })
    }

    pub fn source_shape(&self) -> Shape {
        self.source_shape
    }

    pub fn expected_total(&self) -> u32 {
        self.expected_total
    }

    pub fn received_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.received.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.received.len()
    }

    pub fn is_empty(&self) -> bool {
        self.received.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.received.len() == self.expected_total as usize
    }

    /// Stores a packet. Re-delivery of an identical packet is a no-op.
    pub fn accumulate(&mut self, packet: Packet) -> Result<()> {
        if packet.source_shape != self.source_shape {
            return Err(Error::Protocol(format!(
                "packet {} is for {:?}, stream is {:?}",
                packet.packet_id, packet.source_shape, self.source_shape
            )));
        }
        if packet.total_packets != self.expected_total {
            return Err(Error::Protocol(format!(
                "packet {} claims {} packets, stream has {}",
                packet.packet_id, packet.total_packets, self.expected_total
            )));
        }
        packet.validate()?;
        if let Some(existing) = self.received.get(&packet.packet_id) {
            if *existing == packet {
                return Ok(());
            }
            return Err(Error::Integrity(format!(
                "packet {} re-delivered with different contents",
                packet.packet_id
            )));
        }
        let incoming = packet.window.mask(self.source_shape);
        for other in self.received.values() {
            let overlaps = other.window.indices(self.source_shape).into_iter().any(|i| incoming[i]);
            if overlaps {
                return Err(Error::Protocol(format!(
                    "packet {} overlaps packet {}",
                    packet.packet_id, other.packet_id
                )));
            }
        }
        self.received.insert(packet.packet_id, packet);
        Ok(())
    }

    /// Recovers every received window and sums them in packet-id order.
    pub fn render(&self) -> Result<Rendered> {
        if self.received.is_empty() {
            return Err(Error::InvalidState("nothing received yet".into()));
        }
        let shape = self.source_shape;
        let mut total: Option<Vec<Complex64>> = None;
        let mut received_samples = 0;
        for packet in self.received.values() {
            let mut sparse = vec![Complex64::default(); shape.len()];
            for (i, &z) in packet.window.indices(shape).into_iter().zip(&packet.payload) {
                sparse[i] = z;
            }
            let part = holographic::windowed_recovery(&ComplexArray::new(shape, sparse)?, &packet.window)?;
            received_samples += packet.window.size();
            match total.as_mut() {
                None => total = Some(part.into_vec()),
                Some(acc) => acc.iter_mut().zip(part.as_slice()).for_each(|(a, b)| *a += b),
            }
        }
        let recovered = ComplexArray::new(shape, total.expect("at least one packet"))?;
        let amplitude = holographic::rescale_amplitude(&recovered, received_samples, shape.len())?.amplitudes();
        Ok(Rendered {
            recovered,
            amplitude,
            coverage: received_samples as f64 / shape.len() as f64,
            received_samples,
        })
    }
}

/// Seeded lossy, optionally reordering channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    loss_rate: f64,
    reorder: bool,
    seed: u64,
}

impl ChannelConfig {
    pub fn new(loss_rate: f64, reorder: bool, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&loss_rate) {
            return Err(Error::invalid(format!("loss rate {loss_rate} outside [0, 1]")));
        }
        Ok(Self {
            loss_rate,
            reorder,
            seed,
        })
    }

    pub fn loss_rate(&self) -> f64 {
        self.loss_rate
    }

    pub fn reorder(&self) -> bool {
        self.reorder
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Drops each item independently with probability `loss_rate`, then
/// shuffles the survivors if `reorder` is set. Deterministic in the seed.
pub fn simulate_channel<T>(items: Vec<T>, config: &ChannelConfig) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut survivors: Vec<T> = items
        .into_iter()
        .filter(|_| rng.gen::<f64>() >= config.loss_rate)
        .collect();
    if config.reorder {
        survivors.shuffle(&mut rng);
    }
    survivors
}
