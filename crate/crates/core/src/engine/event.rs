//! Replayable event log.
//!
//! The log lives inside [`GameState`](super::GameState) so `apply` stays a
//! pure value-to-value transition. To keep state clones cheap it is a
//! persistent cons list: pushing shares the entire prefix, so cloning a
//! state is O(1) in log length.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::board::Resource;

use super::Action;

/// One resource payout from a production roll.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Payout {
    pub player: usize,
    pub resource: Resource,
    pub amount: u8,
}

/// One applied action with its observable consequences.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Event {
    pub turn: u32,
    pub player: usize,
    pub action: Action,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dice: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub payouts: Option<Vec<Payout>>,
    pub vp_after: [u32; 2],
}

#[derive(Debug)]
struct LogNode {
    event: Event,
    prev: Option<Arc<LogNode>>,
    len: u32,
}

/// Append-only event log with structural sharing.
#[derive(Clone, Debug, Default)]
pub struct EventLog(Option<Arc<LogNode>>);

impl EventLog {
    pub fn push(&mut self, event: Event) {
        let prev = self.0.take();
        let len = prev.as_ref().map_or(0, |n| n.len) + 1;
        self.0 = Some(Arc::new(LogNode { event, prev, len }));
    }

    pub fn len(&self) -> u32 {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn last(&self) -> Option<&Event> {
        self.0.as_ref().map(|n| &n.event)
    }

    /// Events oldest-first.
    pub fn to_vec(&self) -> Vec<Event> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut cur = self.0.as_deref();
        while let Some(node) = cur {
            out.push(node.event.clone());
            cur = node.prev.as_deref();
        }
        out.reverse();
        out
    }
}

impl FromIterator<Event> for EventLog {
    fn from_iter<I: IntoIterator<Item = Event>>(iter: I) -> Self {
        let mut log = EventLog::default();
        for e in iter {
            log.push(e);
        }
        log
    }
}

impl PartialEq for EventLog {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.to_vec() == other.to_vec()
    }
}

impl Serialize for EventLog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EventLog {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Event>::deserialize(d)?.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(turn: u32) -> Event {
        Event {
            turn,
            player: 0,
            action: Action::EndTurn,
            dice: None,
            payouts: None,
            vp_after: [2, 2],
        }
    }

    #[test]
    fn push_shares_prefix() {
        let mut a = EventLog::default();
        a.push(ev(0));
        a.push(ev(1));
        let mut b = a.clone();
        b.push(ev(2));
        assert_eq!(a.len(), 2);
        assert_eq!(b.len(), 3);
        assert_eq!(b.to_vec()[..2], a.to_vec()[..]);
    }

    #[test]
    fn serde_round_trip() {
        let mut log = EventLog::default();
        log.push(ev(0));
        log.push(ev(1));
        let json = serde_json::to_string(&log).unwrap();
        let back: EventLog = serde_json::from_str(&json).unwrap();
        assert_eq!(log, back);
    }
}
