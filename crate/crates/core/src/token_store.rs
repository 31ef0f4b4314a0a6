//! Local storage for users' delegated network tokens.
//!
//! One record per line, tab separated:
//! `userAlias  network  token  subject  expiresAt`, with `expiresAt` as an
//! ISO-8601 UTC timestamp. The file is rewritten atomically on every change.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use parking_lot::{Mutex, RwLock};

use crate::model::{SocialNetworkId, Timestamp};
use crate::sdk::AuthToken;

#[derive(Debug, thiserror::Error)]
pub enum TokenStoreError {
    #[error("token store i/o on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("field {field} may not contain tabs or line breaks")]
    InvalidField { field: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenRecord {
    pub user_alias: String,
    pub network: SocialNetworkId,
    pub token: AuthToken,
}

type Key = (String, SocialNetworkId);

#[derive(Debug)]
pub struct TokenStore {
    path: PathBuf,
    records: RwLock<BTreeMap<Key, AuthToken>>,
    write_lock: Mutex<()>,
}

impl TokenStore {
    /// Opens the store at `path`, loading it if the file exists.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, TokenStoreError> {
        let path = path.into();
        let records = match std::fs::read_to_string(&path) {
            Ok(text) => parse(&path, &text)?,
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(source) => return Err(TokenStoreError::Io { path, source }),
        };
        Ok(Self {
            path,
            records: RwLock::new(records),
            write_lock: Mutex::new(()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Stores `token` for `user_alias`, replacing any earlier token for the
    /// same network.
    pub fn put(&self, user_alias: &str, token: AuthToken) -> Result<(), TokenStoreError> {
        check_field("userAlias", user_alias)?;
        check_field("token", &token.token)?;
        check_field("subject", &token.subject)?;
        if user_alias.is_empty() {
            return Err(TokenStoreError::InvalidField { field: "userAlias" });
        }
        let _guard = self.write_lock.lock();
        let mut next = self.records.read().clone();
        next.insert((user_alias.to_owned(), token.network.clone()), token);
        self.flush(&next)?;
        *self.records.write() = next;
        Ok(())
    }

    pub fn get(&self, user_alias: &str, network: &SocialNetworkId) -> Option<AuthToken> {
        self.get_at(user_alias, network, Timestamp::now())
    }

    /// The stored token, unless it has expired by `now`.
    pub fn get_at(
        &self,
        user_alias: &str,
        network: &SocialNetworkId,
        now: Timestamp,
    ) -> Option<AuthToken> {
        self.records
            .read()
            .get(&(user_alias.to_owned(), network.clone()))
            .filter(|token| !token.is_expired_at(now))
            .cloned()
    }

    pub fn purge_expired(&self) -> Result<usize, TokenStoreError> {
        self.purge_expired_at(Timestamp::now())
    }

    pub fn purge_expired_at(&self, now: Timestamp) -> Result<usize, TokenStoreError> {
        let _guard = self.write_lock.lock();
        let mut next = self.records.read().clone();
        let before = next.len();
        next.retain(|_, token| !token.is_expired_at(now));
        let removed = before - next.len();
        if removed > 0 {
            self.flush(&next)?;
            *self.records.write() = next;
        }
        Ok(removed)
    }

    /// All records, expired ones included.
    pub fn records(&self) -> Vec<TokenRecord> {
        self.records
            .read()
            .iter()
            .map(|((alias, network), token)| TokenRecord {
                user_alias: alias.clone(),
                network: network.clone(),
                token: token.clone(),
            })
            .collect()
    }

    fn flush(&self, records: &BTreeMap<Key, AuthToken>) -> Result<(), TokenStoreError> {
        let io = |source| TokenStoreError::Io {
            path: self.path.clone(),
            source,
        };
        let dir = match self.path.parent() {
            Some(dir) if !dir.as_os_str().is_empty() => dir,
            _ => Path::new("."),
        };
        let mut file = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        for ((alias, network), token) in records {
            writeln!(
                file,
                "{alias}\t{network}\t{}\t{}\t{}",
                token.token, token.subject, token.expires_at
            )
            .map_err(io)?;
        }
        file.as_file().sync_all().map_err(io)?;
        file.persist(&self.path).map_err(|err| io(err.error))?;
        Ok(())
    }
}

fn check_field(field: &'static str, value: &str) -> Result<(), TokenStoreError> {
    if value.contains(['\t', '\n', '\r']) {
        Err(TokenStoreError::InvalidField { field })
    } else {
        Ok(())
    }
}

fn parse(path: &Path, text: &str) -> Result<BTreeMap<Key, AuthToken>, TokenStoreError> {
    let mut records = BTreeMap::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| TokenStoreError::Malformed {
            path: path.to_owned(),
            line: index + 1,
            reason,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [alias, network, token, subject, expires] = fields[..] else {
            return Err(malformed(format!(
                "expected 5 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let network = SocialNetworkId::new(network).map_err(|e| malformed(e.to_string()))?;
        let expires_at = Timestamp::parse_iso8601(expires).map_err(|e| malformed(e.to_string()))?;
        records.insert(
            (alias.to_owned(), network.clone()),
            AuthToken {
                token: token.to_owned(),
                network,
                subject: subject.to_owned(),
                expires_at,
            },
        );
    }
    Ok(records)
}
