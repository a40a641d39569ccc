#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace storeim {

enum class Errc {
  OutOfRange,
  MalformedHex,
  MalformedPackageId,
  RootUnreadable,
  NotZoneTransfer,
  NotSqlite,
  CorruptDatabase,
  MissingTable,
  AllTablesMissing,
  MalformedJson,
  NoRecognizedTags,
  NotRegExport,
  PackageKeyNotFound,
  AmbiguousInterpretation,
  StreamRead,
  NotPcap,
  NotCsv,
  MissingColumns,
  OutputNotEmpty,
  InvalidArgument,
  Io,
};

constexpr std::string_view errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::MalformedHex: return "MalformedHex";
    case Errc::MalformedPackageId: return "MalformedPackageId";
    case Errc::RootUnreadable: return "RootUnreadable";
    case Errc::NotZoneTransfer: return "NotZoneTransfer";
    case Errc::NotSqlite: return "NotSqlite";
    case Errc::CorruptDatabase: return "CorruptDatabase";
    case Errc::MissingTable: return "MissingTable";
    case Errc::AllTablesMissing: return "AllTablesMissing";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::NoRecognizedTags: return "NoRecognizedTags";
    case Errc::NotRegExport: return "NotRegExport";
    case Errc::PackageKeyNotFound: return "PackageKeyNotFound";
    case Errc::AmbiguousInterpretation: return "AmbiguousInterpretation";
    case Errc::StreamRead: return "StreamRead";
    case Errc::NotPcap: return "NotPcap";
    case Errc::NotCsv: return "NotCsv";
    case Errc::MissingColumns: return "MissingColumns";
    case Errc::OutputNotEmpty: return "OutputNotEmpty";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace storeim
