#pragma once

#include "mpkc/schemes.hpp"

namespace mpkc::keyio {

// Binary length-prefixed container around text sections:
//   magic "MPKF" | u32 version | u32 kind length | kind | u32 section count
//   | per section: u32 name length, name, u64 body length, body
//   | u64 fnv1a checksum of everything above.
// Bodies are text (JSON records carrying prefix-notation expressions and
// decimal residues). Round trips are bit-exact.
struct Section {
  std::string name;
  std::string body;
};

struct KeyFileContent {
  u32 version = 1;
  std::string kind;
  std::vector<Section> sections;

  const Section* find(const std::string& name) const;
};

std::vector<u8> key_file_emit(const KeyFileContent& content);
// Distinct errors: bad magic, version mismatch, truncation, checksum failure.
KeyFileContent key_file_parse(std::span<const u8> bytes);

void write_file(const std::string& path, std::span<const u8> bytes);
std::vector<u8> read_file(const std::string& path);

u64 fnv1a(std::span<const u8> bytes);

// Key-object serialization. Public files carry no private sections; parsing
// a private object out of a public file fails with "no private section".
std::vector<u8> emit_pkc_public(const PkcPublicKey& key);
std::vector<u8> emit_pkc_private(const PkcKeyPair& pair);
std::vector<u8> emit_sig_verification(const SigPublicKey& key);
std::vector<u8> emit_sig_authentication(const SigAuthTable& table);
std::vector<u8> emit_sig_private(const SigKeySet& keys);

PkcPublicKey parse_pkc_public(std::span<const u8> bytes);
PkcPrivateKey parse_pkc_private(std::span<const u8> bytes);
SigPublicKey parse_sig_verification(std::span<const u8> bytes);
SigAuthTable parse_sig_authentication(std::span<const u8> bytes);
SigKeySet parse_sig_private(std::span<const u8> bytes);

// Message payloads: decimal element lists, whitespace separated.
std::string emit_message(std::span<const u64> elements);
std::vector<u64> parse_message(const std::string& text);

// Claims and signed messages as single-line JSON records.
std::string emit_claim(const SigClaim& claim);
SigClaim parse_claim(const std::string& text);
std::string emit_sig_message(const SigMessage& sig);
SigMessage parse_sig_message(const std::string& text);

}  // namespace mpkc::keyio
