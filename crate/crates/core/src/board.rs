//! Game board: element universe, claim states and dynamic visibility.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Index into the board universe. For graph boards this is the canonical
/// encoding of an unordered vertex pair.
pub type Element = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimState {
    Unclaimed,
    Maker,
    Breaker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("unsupported on this board: {0}")]
    Unsupported(String),
}

/// Canonical id of the unordered pair {u,v}, u < v, on n vertices.
///
/// id = u*n - u(u+1)/2 + (v - u - 1), a dense 0..C(n,2) indexing.
pub fn encode_pair(n: usize, u: usize, v: usize) -> Element {
    assert!(u < v && v < n, "need u < v < n");
    (u * n - u * (u + 1) / 2 + (v - u - 1)) as Element
}

/// Inverse of [`encode_pair`].
pub fn decode_pair(n: usize, id: Element) -> (usize, usize) {
    let mut id = id as usize;
    let mut u = 0usize;
    loop {
        let row = n - 1 - u;
        if id < row {
            return (u, u + 1 + id);
        }
        id -= row;
        u += 1;
    }
}

/// Claim state of every element of a finite universe plus the dynamic
/// visible sub-board.
#[derive(Debug, Clone)]
pub struct Board {
    universe: usize,
    claims: Vec<ClaimState>,
    visible: Vec<bool>,
    visible_count: usize,
    unclaimed_visible: usize,
    /// Vertex count when the universe is the edge set of K_n.
    n: Option<usize>,
}

impl Board {
    /// Static game board over the edges of K_n: everything visible.
    pub fn complete_graph(n: usize) -> Result<Board, BoardError> {
        if n < 2 {
            return Err(BoardError::InvalidBoard(format!(
                "complete graph board needs n >= 2, got {n}"
            )));
        }
        let universe = n * (n - 1) / 2;
        Ok(Board {
            universe,
            claims: vec![ClaimState::Unclaimed; universe],
            visible: vec![true; universe],
            visible_count: universe,
            unclaimed_visible: universe,
            n: Some(n),
        })
    }

    /// Dynamic game board: V_0 is empty, elements enter via reveal.
    pub fn dynamic_graph(n: usize) -> Result<Board, BoardError> {
        let mut b = Board::complete_graph(n)?;
        b.visible = vec![false; b.universe];
        b.visible_count = 0;
        b.unclaimed_visible = 0;
        Ok(b)
    }

    /// Abstract board over `universe` elements.
    pub fn abstract_board(universe: usize, dynamic: bool) -> Result<Board, BoardError> {
        if universe == 0 {
            return Err(BoardError::InvalidBoard("empty universe".into()));
        }
        Ok(Board {
            universe,
            claims: vec![ClaimState::Unclaimed; universe],
            visible: vec![!dynamic; universe],
            visible_count: if dynamic { 0 } else { universe },
            unclaimed_visible: if dynamic { 0 } else { universe },
            n: None,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn vertex_count(&self) -> Option<usize> {
        self.n
    }

    pub fn state(&self, e: Element) -> ClaimState {
        self.claims[e as usize]
    }

    pub fn is_visible(&self, e: Element) -> bool {
        self.visible[e as usize]
    }

    pub fn visible_count(&self) -> usize {
        self.visible_count
    }

    /// Unclaimed elements of the visible sub-board.
    pub fn unclaimed_visible_count(&self) -> usize {
        self.unclaimed_visible
    }

    pub fn unrevealed_count(&self) -> usize {
        self.universe - self.visible_count
    }

    pub fn claimed_count(&self, player: Player) -> usize {
        let want = match player {
            Player::Maker => ClaimState::Maker,
            Player::Breaker => ClaimState::Breaker,
        };
        self.claims.iter().filter(|&&c| c == want).count()
    }

    pub fn claim(&mut self, e: Element, player: Player) -> Result<(), BoardError> {
        let i = e as usize;
        if i >= self.universe {
            return Err(BoardError::IllegalMove(format!("element {e} out of range")));
        }
        if !self.visible[i] {
            return Err(BoardError::IllegalMove(format!("element {e} not visible")));
        }
        if self.claims[i] != ClaimState::Unclaimed {
            return Err(BoardError::IllegalMove(format!("element {e} already claimed")));
        }
        self.claims[i] = match player {
            Player::Maker => ClaimState::Maker,
            Player::Breaker => ClaimState::Breaker,
        };
        self.unclaimed_visible -= 1;
        Ok(())
    }

    /// Reveal adds elements to the visible sub-board. Re-revealing is an
    /// error rather than a no-op so strategy bugs surface early.
    pub fn reveal(&mut self, elements: &[Element]) -> Result<(), BoardError> {
        if elements.is_empty() {
            return Err(BoardError::IllegalMove("reveal of empty set".into()));
        }
        for &e in elements {
            let i = e as usize;
            if i >= self.universe {
                return Err(BoardError::IllegalMove(format!("element {e} out of range")));
            }
            if self.visible[i] {
                return Err(BoardError::IllegalMove(format!("element {e} already visible")));
            }
        }
        // check duplicates within the batch
        let mut sorted: Vec<Element> = elements.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(BoardError::IllegalMove("duplicate element in reveal".into()));
        }
        for &e in elements {
            self.visible[e as usize] = true;
        }
        self.visible_count += elements.len();
        self.unclaimed_visible += elements.len();
        Ok(())
    }

    /// Graph whose edge set is exactly the Maker-claimed elements.
    pub fn maker_graph(&self) -> Result<Graph, BoardError> {
        self.player_graph(Player::Maker)
    }

    pub fn breaker_graph(&self) -> Result<Graph, BoardError> {
        self.player_graph(Player::Breaker)
    }

    fn player_graph(&self, player: Player) -> Result<Graph, BoardError> {
        let n = self
            .n
            .ok_or_else(|| BoardError::Unsupported("not a graph board".into()))?;
        let want = match player {
            Player::Maker => ClaimState::Maker,
            Player::Breaker => ClaimState::Breaker,
        };
        let mut g = Graph::new(n);
        for (i, &c) in self.claims.iter().enumerate() {
            if c == want {
                let (u, v) = decode_pair(n, i as Element);
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.universe as Element).into_iter()
    }

    /// Unclaimed elements of the visible board, in id order.
    pub fn unclaimed_visible(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.universe).filter_map(move |i| {
            if self.visible[i] && self.claims[i] == ClaimState::Unclaimed {
                Some(i as Element)
            } else {
                None
            }
        })
    }

    pub fn unrevealed(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.universe).filter_map(move |i| if self.visible[i] { None } else { Some(i as Element) })
    }

    /// Partition invariant: every element is in exactly one of the three
    /// claim states and claimed elements are visible.
    pub fn check_invariants(&self) -> Result<(), BoardError> {
        let mut uv = 0;
        let mut vis = 0;
        for i in 0..self.universe {
            if self.claims[i] != ClaimState::Unclaimed && !self.visible[i] {
                return Err(BoardError::InvalidBoard(format!(
                    "claimed element {i} is invisible"
                )));
            }
            if self.visible[i] {
                vis += 1;
                if self.claims[i] == ClaimState::Unclaimed {
                    uv += 1;
                }
            }
        }
        if vis != self.visible_count || uv != self.unclaimed_visible {
            return Err(BoardError::InvalidBoard("cached counts out of sync".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_board_sizes() {
        assert_eq!(Board::complete_graph(4).unwrap().universe_size(), 6);
        assert_eq!(Board::complete_graph(2).unwrap().universe_size(), 1);
        assert!(matches!(
            Board::complete_graph(1),
            Err(BoardError::InvalidBoard(_))
        ));
    }

    #[test]
    fn pair_encoding_roundtrips_exhaustively() {
        // n = 10: every id decodes back to its pair
        let n = 10;
        let mut next = 0;
        for u in 0..n {
            for v in u + 1..n {
                let id = encode_pair(n, u, v);
                assert_eq!(id, next);
                assert_eq!(decode_pair(n, id), (u, v));
                next += 1;
            }
        }
        assert_eq!(next as usize, 45);
    }

    #[test]
    fn claim_transitions() {
        let mut b = Board::complete_graph(4).unwrap();
        b.claim(0, Player::Maker).unwrap();
        assert_eq!(b.state(0), ClaimState::Maker);
        assert!(matches!(
            b.claim(0, Player::Breaker),
            Err(BoardError::IllegalMove(_))
        ));
    }

    #[test]
    fn dynamic_visibility() {
        let mut b = Board::dynamic_graph(4).unwrap();
        assert!(matches!(
            b.claim(2, Player::Breaker),
            Err(BoardError::IllegalMove(_))
        ));
        assert!(matches!(b.reveal(&[]), Err(BoardError::IllegalMove(_))));
        b.reveal(&[2]).unwrap();
        assert_eq!(b.visible_count(), 1);
        b.reveal(&[0, 5]).unwrap();
        assert_eq!(b.visible_count(), 3);
        assert!(matches!(b.reveal(&[2]), Err(BoardError::IllegalMove(_))));
        b.claim(2, Player::Breaker).unwrap();
        b.check_invariants().unwrap();
    }

    #[test]
    fn maker_graph_path() {
        let mut b = Board::complete_graph(3).unwrap();
        assert_eq!(b.maker_graph().unwrap().edge_count(), 0);
        b.claim(encode_pair(3, 1, 2), Player::Maker).unwrap();
        b.claim(encode_pair(3, 0, 1), Player::Maker).unwrap();
        let g = b.maker_graph().unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn abstract_board_has_no_graph() {
        let b = Board::abstract_board(5, false).unwrap();
        assert!(matches!(b.maker_graph(), Err(BoardError::Unsupported(_))));
    }
}
