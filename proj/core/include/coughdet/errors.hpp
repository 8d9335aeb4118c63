#pragma once

#include <stdexcept>
#include <string>

namespace coughdet {

// Exit-code categories used by the CLI: 1 usage, 2 data, 3 numeric.
enum class ErrorKind { usage = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& m) : Error(ErrorKind::usage, m) {}
};
struct DataError : Error {
    explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& m) : Error(ErrorKind::numeric, m) {}
};

#define COUGHDET_DATA_ERROR(Name)                                              \
    struct Name : DataError {                                                  \
        explicit Name(const std::string& m) : DataError(#Name ": " + m) {}     \
    }
#define COUGHDET_NUMERIC_ERROR(Name)                                           \
    struct Name : NumericError {                                               \
        explicit Name(const std::string& m) : NumericError(#Name ": " + m) {}  \
    }

// audio_ingest
COUGHDET_DATA_ERROR(MalformedWav);
COUGHDET_DATA_ERROR(UnsupportedEncoding);
COUGHDET_DATA_ERROR(EmptyAudio);
COUGHDET_DATA_ERROR(UnknownLabel);
COUGHDET_DATA_ERROR(UnknownSplit);
COUGHDET_DATA_ERROR(DuplicatePath);
COUGHDET_DATA_ERROR(MissingColumn);
// mfcc
COUGHDET_DATA_ERROR(NegativeFrequency);
COUGHDET_DATA_ERROR(DegenerateBand);
COUGHDET_DATA_ERROR(ClipTooShort);
COUGHDET_DATA_ERROR(TooFewFrames);
// pca / pls
COUGHDET_DATA_ERROR(DegenerateData);
COUGHDET_DATA_ERROR(DimensionMismatch);
COUGHDET_DATA_ERROR(ConstantTarget);
// selectors
COUGHDET_DATA_ERROR(KOutOfRange);
COUGHDET_DATA_ERROR(KExceedsRelevant);
COUGHDET_DATA_ERROR(ConfigInvalid);
// svm
COUGHDET_DATA_ERROR(SingleClass);
COUGHDET_NUMERIC_ERROR(NoConvergence);
// metrics
COUGHDET_DATA_ERROR(LengthMismatch);
COUGHDET_DATA_ERROR(EmptyInput);
// pipeline
COUGHDET_DATA_ERROR(VersionMismatch);
COUGHDET_DATA_ERROR(CorruptModel);
COUGHDET_DATA_ERROR(IoError);
COUGHDET_DATA_ERROR(MissingFile);

#undef COUGHDET_DATA_ERROR
#undef COUGHDET_NUMERIC_ERROR

}  // namespace coughdet
