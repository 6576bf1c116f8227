# Convolutional and recurrent branches over a shared embedding, joined before the classifier.
from tensorflow import keras
from tensorflow.keras import layers

VOCAB_SIZE = 10000
MAX_LEN = 100
EMBED_DIM = 128


class CNNRNN(keras.Model):
    def __init__(self):
        super().__init__()
        self.embedding = layers.Embedding(VOCAB_SIZE, EMBED_DIM)
        self.embed_dropout = layers.Dropout(0.2)
        self.conv1 = layers.Conv1D(64, 5, activation='relu')
        self.pool = layers.MaxPooling1D(2)
        self.conv2 = layers.Conv1D(64, 3, activation='relu')
        self.flatten = layers.Flatten()
        self.rnn = layers.LSTM(64)
        self.concat = layers.Concatenate()
        self.hidden = layers.Dense(64, activation='relu')
        self.dropout = layers.Dropout(0.5)
        self.out = layers.Dense(1, activation='sigmoid')

    def call(self, inputs):
        x = self.embed_dropout(self.embedding(inputs))
        c = self.conv1(x)
        c = self.pool(c)
        c = self.conv2(c)
        c = self.flatten(c)
        r = self.rnn(x)
        h = self.concat([c, r])
        h = self.hidden(h)
        h = self.dropout(h)
        return self.out(h)


model = CNNRNN()
model.build((None, MAX_LEN))
model.compile(optimizer='adam', loss='binary_crossentropy', metrics=['accuracy'])
train_ds = keras.utils.text_dataset_from_directory('data/imdb/train', batch_size=32)
model.fit(train_ds, epochs=10)
