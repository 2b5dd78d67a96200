import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Environment settings
ENV = os.getenv('APP_ENV', 'dev')
IS_DEV = ENV == 'dev'
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

# Alphabet settings
MAX_ALPHABET_SIZE = 16  # letters are the hex digits 0-9a-f
LETTER_SYMBOLS = '0123456789abcdef'

# Stabilization policy defaults
POLICY_INITIAL_LENGTH = int(os.getenv('POLICY_INITIAL_LENGTH', '4096'))
POLICY_INITIAL_PER_LETTER = int(os.getenv('POLICY_INITIAL_PER_LETTER', '64'))
POLICY_GROWTH_FACTOR = int(os.getenv('POLICY_GROWTH_FACTOR', '2'))
POLICY_MAX_LENGTH = int(os.getenv('POLICY_MAX_LENGTH', str(2 ** 20)))
MAX_PREFIX_LENGTH = int(os.getenv('MAX_PREFIX_LENGTH', str(2 ** 24)))  # longest prefix any command may materialize

# Verification settings
DEFAULT_MAX_FACTOR_LENGTH = int(os.getenv('DEFAULT_MAX_FACTOR_LENGTH', '10'))
WORD_CHECK_PREFIX_LENGTH = int(os.getenv('WORD_CHECK_PREFIX_LENGTH', str(2 ** 14)))
ORACLE_CROSSCHECK_LIMIT = int(os.getenv('ORACLE_CROSSCHECK_LIMIT', '64'))
VERIFY_WORKERS = int(os.getenv('VERIFY_WORKERS', '4'))
PERIODICITY_BAND_WIDTH = int(os.getenv('PERIODICITY_BAND_WIDTH', '2'))  # lengths per band in the aperiodicity check

# Output settings
DEFAULT_OUTPUT_FORMAT = os.getenv('DEFAULT_OUTPUT_FORMAT', 'json')

# Profiling settings
PROFILE_LOG_DIR = os.getenv('PROFILE_LOG_DIR', 'logs')
PROFILE_SAMPLING_INTERVAL = float(os.getenv('PROFILE_SAMPLING_INTERVAL', '1.0'))

# Define private settings that shouldn't be displayed
PRIVATE_SETTINGS = {
    'LETTER_SYMBOLS',
}
