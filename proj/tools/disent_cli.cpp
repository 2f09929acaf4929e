// Placeholder main; the real CLI is assembled once the library modules exist.
int main() { return 0; }
